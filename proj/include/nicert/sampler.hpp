#pragma once

#include <cstdint>

#include "nicert/transfer_matrix.hpp"
#include "nicert/uncertainty.hpp"

namespace nicert {

struct SampleSpec {
    UncertaintyClass cls;
    int n = 1;
    int modes = 2;
    std::uint64_t seed = 0;
    double scale = 1.0;
};

/// Seeded random in-class plant.  Deterministic in the spec; rejection
/// resamples until the membership check passes (at most 100 attempts, then
/// SamplerExhausted).
TransferMatrix sample_plant(const SampleSpec& spec);

/// Derive an independent stream seed; used to split batches.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nicert
