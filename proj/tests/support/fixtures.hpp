#pragma once

#include <filesystem>
#include <string>

#include "deplens/ingest.hpp"

namespace support {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(DEPLENS_FIXTURE_DIR) / name;
}

/// First dataset of `layer` in the fixture's manifest.
inline deplens::LoadedLayer load_fixture(const std::string& name, deplens::Layer layer) {
    const auto m = deplens::load_manifest(fixture(name) / "manifest.json");
    for (const auto& d : m.datasets)
        if (d.layer == layer) return deplens::load_layer(d, m.columns);
    throw std::runtime_error("fixture " + name + " has no such layer");
}

/// Dataset of `layer` tagged with `snapshot`.
inline deplens::LoadedLayer load_fixture(const std::string& name, deplens::Layer layer, const std::string& snapshot) {
    const auto m = deplens::load_manifest(fixture(name) / "manifest.json");
    for (const auto& d : m.datasets)
        if (d.layer == layer && d.snapshot_label == snapshot) return deplens::load_layer(d, m.columns);
    throw std::runtime_error("fixture " + name + " has no such snapshot");
}

}  // namespace support
