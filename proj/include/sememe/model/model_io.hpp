#pragma once

#include <filesystem>

#include "sememe/data/corpus.hpp"
#include "sememe/model/network.hpp"
#include "sememe/nd/checkpoint.hpp"

namespace sememe::model {

struct SavedModel {
  Network network;
  data::Vocabs vocabs;
  nd::Metadata meta;
};

// Checkpoint with the architecture, hyperparameters and both vocabularies
// stored as metadata, so a model can be reloaded without its corpus.
// `extra` entries are stored verbatim and returned by load_model.
void save_model(const std::filesystem::path& path, const Network& network, const data::Vocabs& vocabs,
                const nd::Metadata& extra = {});
SavedModel load_model(const std::filesystem::path& path);

}  // namespace sememe::model
