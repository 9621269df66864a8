#pragma once

#include <optional>
#include <string>

#include "synthrisk/dataset.hpp"

namespace synthrisk {

// Loads an RFC-4180-style CSV (header row required, UTF-8). Without hints,
// attribute kinds are inferred: a column whose every cell parses as a float is
// Numeric, anything else Categorical. With hints, the header must match the
// hinted names and kinds are taken from the hints.
Dataset load_csv(const std::string& path, const std::optional<Schema>& schema_hints = {});

void save_csv(const Dataset& data, const std::string& path);

// Loads externally generated synthetic data against a known schema. Unseen
// categorical levels extend the vocabulary (with a warning on stderr); a
// header mismatch is an error.
Dataset load_external_synth(const std::string& path, Schema schema);

}  // namespace synthrisk
