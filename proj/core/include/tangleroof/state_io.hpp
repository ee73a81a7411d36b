#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tangleroof/state.hpp"

namespace tangleroof {

// State file schema: {"n": int, "amplitudes": [[re, im], ...]} with 2^n
// entries in the library's bit-string order.
struct StateParseOptions {
    bool renormalize = false;
    // Called with a human readable message when the norm is off by > 1e-6.
    std::function<void(const std::string&)> warn;
};

PureState state_from_json(const nlohmann::json& doc, const StateParseOptions& options = {});
PureState parse_state(std::string_view text, const StateParseOptions& options = {});
PureState load_state(const std::filesystem::path& path, const StateParseOptions& options = {});

nlohmann::json state_to_json(const PureState& state);

}  // namespace tangleroof
