#pragma once

#include "hup/dynamics.hpp"
#include "hup/measure.hpp"
#include "hup/transform.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hup {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "hup 0.1.0";

Curve curve_from_json(const Json& j);
Json curve_to_json(const Curve& c);
// file path, or an inline JSON document when the argument starts with '{'
Curve load_curve(const std::string& path_or_json);

Json density_to_json(const Density& f, const Curve& curve, int grid = 8192);
Density density_from_json(const Json& j);
Density load_density(const std::string& path);

Json interval_list(const std::vector<Interval>& ivs);

Json to_json(const ProjectionSplit& sp);
Json to_json(const RotationEstimate& r);
Json to_json(const PeriodicOrbit& o);
Json to_json(const IntervalCertificate& c, bool with_orbit = false);
Json to_json(const SigmaSequence& s);
Json to_json(const CuspMaps& c);
Json to_json(const AnnihilationReport& r);
Json to_json(const AngleProbe& p);
Json to_json(const EllipseReduction& e);
Json to_json(const SliceCheck& s);
Json to_json(const RadonSlice& s);

struct Report {
    std::string command;
    std::string version = kVersion;
    Json inputs = Json::object();
    Json results = Json::object();

    Json to_json() const;
    static Report from_json(const Json& j);
    std::string dump() const { return to_json().dump(2) + "\n"; }
};

// write to a temporary file next to `path` and rename it into place
void write_atomic(const std::string& path, const std::string& content);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace hup
