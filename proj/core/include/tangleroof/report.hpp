#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tangleroof/roof_bounds.hpp"
#include "tangleroof/scenarios.hpp"
#include "tangleroof/zero_finder.hpp"

namespace tangleroof {

// %.12g; the textual form used in every CSV cell.
std::string format_number(double v);
// v rounded to 12 significant digits, for JSON emission.
double round12(double v);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    CsvWriter& number(double v);
    CsvWriter& text(const std::string& v);
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

nlohmann::json to_json(const PureState& s);
nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const ZeroSet& zeros);
nlohmann::json to_json(const ZeroPolytope& poly);
nlohmann::json to_json(const AxisInterval& iv);
nlohmann::json to_json(const BoundCurve& curve);
nlohmann::json to_json(const ZeroAnalysis& analysis);
nlohmann::json to_json(const ToyReport& report);

}  // namespace tangleroof
