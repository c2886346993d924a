#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "sememe/data/corpus.hpp"
#include "sememe/nd/tensor.hpp"

namespace sememe::data {

struct SgnsConfig {
  std::size_t dim = 32;
  std::size_t epochs = 5;
  std::size_t negatives = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 7;
};

/// Skip-gram with negative sampling over gold label sequences.
///
/// Every other label of the same example is a context of a label (the window
/// is the whole sequence). Negatives come from the unigram distribution
/// raised to 0.75 and the learning rate decays linearly to near zero.
/// Returns the input vectors, shape [vocab_size, dim]; rows start
/// uniform(-0.08, 0.08) and rows of labels that never occur keep that init.
nd::Tensor pretrain_label_embeddings(std::span<const Example> train, std::size_t vocab_size,
                                     const SgnsConfig& config);

}  // namespace sememe::data
