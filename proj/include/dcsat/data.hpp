#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcsat/linalg.hpp"

namespace dcsat::data {

using linalg::Vec;

struct Dataset {
    std::vector<Vec> x;                       // values in [0, 1]
    std::optional<std::vector<int>> labels;
    std::string name;
    std::size_t dim = 0;                      // ambient n

    std::size_t count() const { return x.size(); }
};

// Latent vectors paired one-to-one with a Dataset.
struct LatentSet {
    std::vector<Vec> z;

    std::size_t count() const { return z.size(); }
    std::size_t dim() const { return z.empty() ? 0 : z.front().size(); }
};

// IDX-format loader (big-endian magic 0x00000803 for images, 0x00000801 for
// labels). Pixels are scaled to [0,1] by division by 255 and flattened
// row-major. `limit` = 0 keeps everything. Errors name the byte offset.
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                       std::size_t limit);

// Deterministic teacher data: z ~ seeded standard normal,
// x = sigmoid(A tanh(B z)) with fixed seeded teacher matrices A (n x h),
// B (h x k), h = 2k. Exact (z, x) pairs at desk scale.
struct SyntheticData {
    Dataset dataset;
    LatentSet latents;
};

SyntheticData synthetic_dataset(std::size_t k, std::size_t n, std::size_t count,
                                std::uint64_t seed);

// Latent text format: "k count" header then one row per latent vector.
void save_latents_file(const LatentSet& latents, const std::string& path);
LatentSet load_latents_file(const std::string& path);

} // namespace dcsat::data
