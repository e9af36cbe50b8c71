#pragma once

#include <vector>

#include "recon/errors.hpp"

namespace recon::harness {

// Contiguous holdout block, indices relative to the evaluation window.
struct Block {
    int start = 0;  // inclusive
    int len = 0;
    int end() const { return start + len - 1; }  // inclusive
};

enum class Scoring { FullBlock, Middle20 };

struct BlockScheme {
    int block_len = 30;
    Scoring scoring = Scoring::FullBlock;

    void validate(int total_years) const {
        if (block_len < 1 || block_len > total_years)
            throw ConfigError("BlockScheme: block_len must be in [1, total_years]");
        if (scoring == Scoring::Middle20 && block_len != 30)
            throw ConfigError("BlockScheme: middle-20 scoring requires 30-year blocks");
    }
};

// All contiguous holdout windows, ascending by start.
inline std::vector<Block> enumerate_blocks(int total_years, int block_len) {
    if (block_len < 1 || block_len > total_years)
        throw ConfigError("enumerate_blocks: block_len must be in [1, total_years]");
    std::vector<Block> blocks;
    blocks.reserve(static_cast<std::size_t>(total_years - block_len + 1));
    for (int s = 0; s + block_len <= total_years; ++s) blocks.push_back({s, block_len});
    return blocks;
}

}  // namespace recon::harness
