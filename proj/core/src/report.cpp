#include "tangleroof/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"
#include "tangleroof/state_io.hpp"

namespace tangleroof {

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(format_number(v).c_str(), nullptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::number(double v) { return text(format_number(v)); }

CsvWriter& CsvWriter::text(const std::string& v) {
    if (filled_ == columns_) throw Error(ErrorCode::invalid_argument, "csv row has too many cells");
    out_ << (filled_ ? "," : "") << v;
    ++filled_;
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw Error(ErrorCode::invalid_argument, "csv row is incomplete");
    out_ << '\n';
    filled_ = 0;
}

nlohmann::json to_json(const PureState& s) {
    nlohmann::json j = state_to_json(s);
    for (auto& amp : j["amplitudes"]) {
        amp[0] = round12(amp[0].get<double>());
        amp[1] = round12(amp[1].get<double>());
    }
    return j;
}

nlohmann::json to_json(const Decomposition& d) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : d) {
        out.push_back({{"weight", round12(c.weight)},
                       {"c3", c.zero_state ? 0.0 : round12(c3(c.state))},
                       {"zero_state", c.zero_state},
                       {"state", to_json(c.state)}});
    }
    return out;
}

nlohmann::json to_json(const ZeroSet& zeros) {
    nlohmann::json roots = nlohmann::json::array();
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        const auto& r = zeros.roots[i];
        nlohmann::json item{{"at_infinity", r.at_infinity},
                            {"multiplicity", r.multiplicity},
                            {"p0", round12(zeros.p0[i])},
                            {"phase", round12(zeros.phases[i])}};
        if (!r.at_infinity) {
            item["z"] = {round12(r.z.real()), round12(r.z.imag())};
            item["modulus"] = round12(std::abs(r.z));
        }
        roots.push_back(std::move(item));
    }
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : zeros.polynomial.coefficients) coeffs.push_back({round12(c.real()), round12(c.imag())});
    return {{"coefficients", coeffs}, {"roots", roots}};
}

nlohmann::json to_json(const ZeroPolytope& poly) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : poly.vertices) {
        verts.push_back({{"bloch", {round12(v.point.x), round12(v.point.y), round12(v.point.z)}},
                         {"p0", round12(v.p0)},
                         {"phase", round12(v.phase)},
                         {"root", v.root_index}});
    }
    return {{"vertices", verts}, {"dimension", poly.dimension}, {"volume", round12(poly.volume)}};
}

nlohmann::json to_json(const AxisInterval& iv) {
    const auto hit = [](const FaceHit& h) {
        nlohmann::json w = nlohmann::json::array();
        for (const double x : h.weights) w.push_back(round12(x));
        return nlohmann::json{{"vertices", h.face}, {"weights", w}, {"p", round12(h.p)}};
    };
    return {{"p_low", round12(iv.p_low)},
            {"p_high", round12(iv.p_high)},
            {"low_witness", hit(iv.low_witness)},
            {"high_witness", hit(iv.high_witness)}};
}

nlohmann::json to_json(const BoundCurve& curve) {
    nlohmann::json knots = nlohmann::json::array();
    for (const auto& k : curve.knots()) {
        knots.push_back({{"p", round12(k.p)}, {"value", round12(k.value)}, {"provenance", to_string(k.provenance)}});
    }
    return knots;
}

nlohmann::json to_json(const ZeroAnalysis& analysis) {
    nlohmann::json out{{"identically_zero", analysis.identically_zero}};
    if (const auto iv = analysis.zero_interval()) {
        out["interval"] = {round12(iv->first), round12(iv->second)};
    } else {
        out["interval"] = nullptr;
    }
    if (analysis.zeros) out["zeros"] = to_json(*analysis.zeros);
    if (analysis.polytope) out["polytope"] = to_json(*analysis.polytope);
    if (analysis.interval) out["axis_interval"] = to_json(*analysis.interval);
    return out;
}

nlohmann::json to_json(const ToyReport& report) {
    nlohmann::json out = to_json(report.analysis);
    out["low_witness_decomposition"] = to_json(report.low_witness);
    out["high_witness_decomposition"] = to_json(report.high_witness);
    out["linearized_knots"] = to_json(report.linearized);
    out["envelope_knots"] = to_json(report.improved.envelope_curve);
    out["p_left"] = report.improved.p_left ? nlohmann::json(round12(*report.improved.p_left)) : nlohmann::json();
    out["p_right"] = report.improved.p_right ? nlohmann::json(round12(*report.improved.p_right)) : nlohmann::json();
    return out;
}

}  // namespace tangleroof
