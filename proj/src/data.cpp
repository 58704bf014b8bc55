#include "dcsat/data.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dcsat/io.hpp"
#include "dcsat/network.hpp"
#include "dcsat/rng.hpp"

namespace dcsat::data {

namespace {

std::uint32_t read_be32(std::istream& is, const std::string& path, std::size_t offset) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error(path + ": truncated at byte offset " + std::to_string(offset));
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

} // namespace

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                       std::size_t limit) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("cannot open image file: " + images_path);
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("cannot open label file: " + labels_path);

    const std::uint32_t img_magic = read_be32(img, images_path, 0);
    if (img_magic != 0x00000803u)
        throw std::runtime_error(images_path + ": bad magic at offset 0 (expected 0x00000803)");
    const std::uint32_t n_images = read_be32(img, images_path, 4);
    const std::uint32_t rows = read_be32(img, images_path, 8);
    const std::uint32_t cols = read_be32(img, images_path, 12);

    const std::uint32_t lab_magic = read_be32(lab, labels_path, 0);
    if (lab_magic != 0x00000801u)
        throw std::runtime_error(labels_path + ": bad magic at offset 0 (expected 0x00000801)");
    const std::uint32_t n_labels = read_be32(lab, labels_path, 4);

    if (n_images != n_labels)
        throw std::runtime_error("image/label count mismatch: " + std::to_string(n_images) +
                                 " images vs " + std::to_string(n_labels) + " labels");

    std::size_t keep = n_images;
    if (limit > 0 && limit < keep) keep = limit;

    const std::size_t dim = std::size_t(rows) * std::size_t(cols);
    Dataset ds;
    ds.name = "mnist";
    ds.dim = dim;
    ds.x.reserve(keep);
    ds.labels = std::vector<int>();
    ds.labels->reserve(keep);

    std::vector<unsigned char> buf(dim);
    for (std::size_t i = 0; i < keep; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim)))
            throw std::runtime_error(images_path + ": truncated at byte offset " +
                                     std::to_string(16 + i * dim));
        Vec v(dim);
        for (std::size_t px = 0; px < dim; ++px) v[px] = static_cast<double>(buf[px]) / 255.0;
        ds.x.push_back(std::move(v));

        char c = 0;
        if (!lab.read(&c, 1))
            throw std::runtime_error(labels_path + ": truncated at byte offset " +
                                     std::to_string(8 + i));
        ds.labels->push_back(static_cast<int>(static_cast<unsigned char>(c)));
    }
    return ds;
}

SyntheticData synthetic_dataset(std::size_t k, std::size_t n, std::size_t count,
                                std::uint64_t seed) {
    if (k >= n) throw std::invalid_argument("synthetic_dataset: need k < n");
    if (count < 1) throw std::invalid_argument("synthetic_dataset: count must be >= 1");

    const std::size_t h = 2 * k;
    auto teacher_gen = rng::stream(seed, "teacher");
    const double bound_a = std::sqrt(6.0 / static_cast<double>(h + n));
    const double bound_b = std::sqrt(6.0 / static_cast<double>(k + h));
    linalg::DenseMatrix a(n, h), b(h, k);
    for (auto& x : b.data) x = (2.0 * teacher_gen.uniform01() - 1.0) * bound_b;
    for (auto& x : a.data) x = (2.0 * teacher_gen.uniform01() - 1.0) * bound_a;

    auto z_gen = rng::stream(seed, "latents");
    SyntheticData out;
    out.dataset.name = "synthetic";
    out.dataset.dim = n;
    out.dataset.x.reserve(count);
    out.latents.z.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vec z = z_gen.normal_vector(k);
        Vec hidden = linalg::matvec(b, z);
        for (auto& v : hidden) v = std::tanh(v);
        Vec x = linalg::matvec(a, hidden);
        for (auto& v : x) v = 1.0 / (1.0 + std::exp(-v));
        out.latents.z.push_back(std::move(z));
        out.dataset.x.push_back(std::move(x));
    }
    return out;
}

void save_latents_file(const LatentSet& latents, const std::string& path) {
    std::ostringstream ss;
    ss << latents.dim() << ' ' << latents.count() << '\n';
    for (const auto& z : latents.z) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (i) ss << ' ';
            ss << io::dtos(z[i]);
        }
        ss << '\n';
    }
    io::atomic_write_file(path, ss.str());
}

LatentSet load_latents_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open latent file: " + path);
    std::size_t dim = 0, count = 0;
    if (!(is >> dim >> count)) throw std::runtime_error(path + ": malformed latent header");
    LatentSet out;
    out.z.assign(count, Vec(dim));
    std::string tok;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (!(is >> tok)) throw std::runtime_error(path + ": truncated latent data");
            out.z[i][j] = io::stod_strict(tok);
        }
    return out;
}

} // namespace dcsat::data
