#pragma once

#include "reeb/certifier.hpp"
#include "reeb/clarke_dual.hpp"
#include "reeb/convex_body.hpp"
#include "reeb/ellipsoid.hpp"
#include "reeb/geodesic_bott.hpp"
#include "reeb/reeb_dynamics.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace reeb {

using Json = nlohmann::json;

/// Comma-separated parameters. Integer and "p/q" tokens keep the list exact;
/// any token with a decimal point or exponent switches the whole list to
/// floating mode.
Ellipsoid parse_ellipsoid_list(const std::string& text);

/// A parsed body: exact or floating ellipsoid parameters when the body is an
/// ellipsoid, and the corresponding smooth model in every case.
struct BodyInput {
  std::optional<Ellipsoid> ellipsoid;
  std::optional<ConvexBody> body;
  const ConvexBody& convex() const { return *body; }
};

/// {"type":"ellipsoid","a":[...]} or
/// {"type":"perturbed","a":[...],"epsilon":e,"quartic":[...]}, optionally with
/// "alpha". Numbers may be JSON numbers or "p/q" strings.
BodyInput parse_body(const Json& j);
BodyInput load_body(const std::string& path);
BodyInput body_from_ellipsoid(const Ellipsoid& e);

Json read_json_file(const std::string& path);

/// Exact values as "p/q" strings, floating ones as numbers.
Json to_json(const Action& a);
Action action_from_json(const Json& j);

Json spectrum_to_json(const Ellipsoid& e, const Spectrum& s, const Action& max_action);

struct SpectrumInput {
  std::optional<Ellipsoid> ellipsoid;
  std::vector<SpectrumEntry> entries;
  Arithmetic mode = Arithmetic::exact;
  int n = 0;
};
SpectrumInput spectrum_from_json(const Json& j);

Json hits_to_json(const std::vector<InvariantHit>& hits);
Json certificate_to_json(const PinchingCertificate& c);
Json orbit_to_json(const ClosedOrbit& o);
Json clarke_to_json(const ClarkeResult& r);
Json bott_row_to_json(const BottRow& row);

}  // namespace reeb
