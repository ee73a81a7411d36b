#include "tangleroof/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tangleroof/error.hpp"

namespace tangleroof {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::parse_error, "state file field '" + field + "': " + why);
}

}  // namespace

PureState state_from_json(const nlohmann::json& doc, const StateParseOptions& options) {
    if (!doc.is_object()) fail("<root>", "expected a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) fail("n", "missing or not an integer");
    const auto n = doc["n"].get<long long>();
    if (n < 1 || n > 20) fail("n", "must be in [1, 20]");
    if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
        fail("amplitudes", "missing or not an array");
    }
    const auto& amps = doc["amplitudes"];
    const std::size_t dim = std::size_t{1} << n;
    if (amps.size() != dim) {
        fail("amplitudes", "expected " + std::to_string(dim) + " entries, got " + std::to_string(amps.size()));
    }

    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const auto& entry = amps[i];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
            fail("amplitudes[" + std::to_string(i) + "]", "expected [re, im]");
        }
        v[static_cast<Eigen::Index>(i)] = Complex(entry[0].get<double>(), entry[1].get<double>());
    }

    PureState state(static_cast<int>(n), std::move(v));
    const double deviation = std::abs(state.norm_squared() - 1.0);
    if (deviation > 1e-6 && options.warn) {
        std::ostringstream msg;
        msg << "state norm^2 deviates from 1 by " << deviation;
        options.warn(msg.str());
    }
    if (options.renormalize && deviation > 0.0) return state.normalized();
    return state;
}

PureState parse_state(std::string_view text, const StateParseOptions& options) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("state file is not valid JSON: ") + e.what());
    }
    return state_from_json(doc, options);
}

PureState load_state(const std::filesystem::path& path, const StateParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open state file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_state(buffer.str(), options);
}

nlohmann::json state_to_json(const PureState& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (std::size_t i = 0; i < state.dim(); ++i) amps.push_back({state[i].real(), state[i].imag()});
    return {{"n", state.n_qubits()}, {"amplitudes", std::move(amps)}};
}

}  // namespace tangleroof
