#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dcsat/linalg.hpp"

namespace dcsat::sensing {

using linalg::DenseMatrix;
using linalg::Vec;

// Random row-selection mask: keeps m = round(sr * n) of the n coordinates,
// drawn without replacement by a seeded Fisher-Yates shuffle. Immutable after
// construction and reconstructible bit-exactly from (n, sr, seed).
struct SamplingMatrix {
    std::size_t ambient_dim = 0;        // n
    std::vector<std::size_t> selected;  // m strictly increasing indices in [0, n)
    double sampling_rate = 0.0;         // sr in (0, 1]
    std::uint64_t seed = 0;

    std::size_t kept() const { return selected.size(); } // m
};

// m = floor(sr * n + 0.5), round half up. Throws std::invalid_argument for
// sr outside (0, 1] or when the rounded count is zero.
SamplingMatrix make_sampler(std::size_t n, double sr, std::uint64_t seed);

// y[j] = x[selected[j]]
Vec apply(const SamplingMatrix& phi, const Vec& x);

// adjoint of apply: lift an m-vector back to ambient dimension, zeros elsewhere
Vec scatter(const SamplingMatrix& phi, const Vec& y);

// the m selected rows of w (n x k) -> m x k
DenseMatrix compose(const SamplingMatrix& phi, const DenseMatrix& w);

// dense 0/1 materialization, for oracle tests only
DenseMatrix dense(const SamplingMatrix& phi);

// Text format: first line "n m sr seed", second line the m indices.
void save_mask(const SamplingMatrix& phi, std::ostream& os);
void save_mask_file(const SamplingMatrix& phi, const std::string& path);
SamplingMatrix load_mask(std::istream& is);
SamplingMatrix load_mask_file(const std::string& path);

} // namespace dcsat::sensing
