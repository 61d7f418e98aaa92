#pragma once

#include <json.hpp>

#include "heilbronn/exponents.hpp"
#include "heilbronn/incidence.hpp"
#include "heilbronn/regularity.hpp"
#include "heilbronn/triangles.hpp"

namespace heilbronn {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Point& p);
Json to_json(const Square& q);
Json to_json(const Rectangle& r);
Json to_json(const Strip& s);
Json point_set_summary(const PointSet& points);
Json to_json(const TriangleWitness& w);
Json to_json(const ScaleProfile& profile);
Json to_json(const HighLowResult& r);
Json to_json(const RegularityCertificate& c);
Json to_json(const SquareExtraction& e);
Json to_json(const CoverReport& r);
Json to_json(const RectangleExtraction& e);
Json to_json(const DirectionRegularity& d);
Json to_json(const TubeConcentration& t);
Json to_json(const ConcentrationStats& s);
Json to_json(const DeltaBound& b);
Json to_json(const ExponentReport& r);

/// Two-sided inequality record: lhs (relation) rhs.
struct Gate {
  std::string name;
  double lhs = 0.0;
  std::string relation = "<=";
  double rhs = 0.0;
  bool passes = false;
};

Gate make_gate(std::string name, double lhs, std::string relation, double rhs);
Json to_json(const Gate& g);

}  // namespace heilbronn
