#include "dcsat/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dcsat/io.hpp"
#include "dcsat/rng.hpp"

namespace dcsat::sensing {

SamplingMatrix make_sampler(std::size_t n, double sr, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_sampler: ambient dimension must be >= 1");
    if (!(sr > 0.0) || sr > 1.0)
        throw std::invalid_argument("make_sampler: sampling rate must be in (0, 1], got " +
                                    io::dtos(sr));
    const std::size_t m = static_cast<std::size_t>(std::floor(sr * static_cast<double>(n) + 0.5));
    if (m < 1) throw std::invalid_argument("make_sampler: round(sr*n) must be >= 1");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto gen = rng::stream(seed, "mask");
    gen.shuffle(idx);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());

    SamplingMatrix phi;
    phi.ambient_dim = n;
    phi.selected = std::move(idx);
    phi.sampling_rate = sr;
    phi.seed = seed;
    return phi;
}

Vec apply(const SamplingMatrix& phi, const Vec& x) {
    if (x.size() != phi.ambient_dim)
        throw std::invalid_argument("sensing::apply: expected vector of length " +
                                    std::to_string(phi.ambient_dim) + ", got " +
                                    std::to_string(x.size()));
    Vec y(phi.selected.size());
    for (std::size_t j = 0; j < phi.selected.size(); ++j) y[j] = x[phi.selected[j]];
    return y;
}

Vec scatter(const SamplingMatrix& phi, const Vec& y) {
    if (y.size() != phi.selected.size())
        throw std::invalid_argument("sensing::scatter: expected vector of length " +
                                    std::to_string(phi.selected.size()) + ", got " +
                                    std::to_string(y.size()));
    Vec x(phi.ambient_dim, 0.0);
    for (std::size_t j = 0; j < phi.selected.size(); ++j) x[phi.selected[j]] = y[j];
    return x;
}

DenseMatrix compose(const SamplingMatrix& phi, const DenseMatrix& w) {
    if (w.rows != phi.ambient_dim)
        throw std::invalid_argument("sensing::compose: expected matrix with " +
                                    std::to_string(phi.ambient_dim) + " rows, got " +
                                    std::to_string(w.rows));
    DenseMatrix out(phi.selected.size(), w.cols);
    for (std::size_t j = 0; j < phi.selected.size(); ++j) {
        const double* src = &w.data[phi.selected[j] * w.cols];
        double* dst = &out.data[j * w.cols];
        std::copy(src, src + w.cols, dst);
    }
    return out;
}

DenseMatrix dense(const SamplingMatrix& phi) {
    DenseMatrix d(phi.selected.size(), phi.ambient_dim);
    for (std::size_t j = 0; j < phi.selected.size(); ++j) d(j, phi.selected[j]) = 1.0;
    return d;
}

void save_mask(const SamplingMatrix& phi, std::ostream& os) {
    os << phi.ambient_dim << ' ' << phi.selected.size() << ' ' << io::dtos(phi.sampling_rate)
       << ' ' << phi.seed << '\n';
    for (std::size_t j = 0; j < phi.selected.size(); ++j) {
        if (j) os << ' ';
        os << phi.selected[j];
    }
    os << '\n';
}

void save_mask_file(const SamplingMatrix& phi, const std::string& path) {
    std::ostringstream ss;
    save_mask(phi, ss);
    io::atomic_write_file(path, ss.str());
}

SamplingMatrix load_mask(std::istream& is) {
    SamplingMatrix phi;
    std::size_t m = 0;
    std::string sr_text;
    if (!(is >> phi.ambient_dim >> m >> sr_text >> phi.seed))
        throw std::runtime_error("load_mask: malformed header line");
    phi.sampling_rate = io::stod_strict(sr_text);
    phi.selected.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (!(is >> phi.selected[j])) throw std::runtime_error("load_mask: truncated index list");
        if (phi.selected[j] >= phi.ambient_dim)
            throw std::runtime_error("load_mask: index out of range");
        if (j > 0 && phi.selected[j] <= phi.selected[j - 1])
            throw std::runtime_error("load_mask: indices not strictly increasing");
    }
    return phi;
}

SamplingMatrix load_mask_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open mask file: " + path);
    return load_mask(is);
}

} // namespace dcsat::sensing
