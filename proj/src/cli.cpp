#include "reeb/cli.hpp"

#include "reeb/certifier.hpp"
#include "reeb/clarke_dual.hpp"
#include "reeb/conley_zehnder.hpp"
#include "reeb/ellipsoid.hpp"
#include "reeb/errors.hpp"
#include "reeb/geodesic_bott.hpp"
#include "reeb/io.hpp"
#include "reeb/reeb_dynamics.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace reeb {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string cell(const Action& a) { return a.is_exact() ? to_string(*a.exact) : fmt(a.value); }

/// Rows for CSV output; plot output writes one (x, y) file per column after
/// the first.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  Json metadata;
  Json result;
  Table table;
};

struct Common {
  std::string out = "json";
  std::string plot_dir = ".";
};

Json base_metadata(const std::string& command, const std::string& provenance) {
  return {{"tool", "reeb-spectra"}, {"command", command}, {"provenance", provenance}};
}

std::string arithmetic_name(Arithmetic a) { return a == Arithmetic::exact ? "exact" : "float"; }

void emit(const Report& r, const Common& c, const std::string& stem, std::ostream& out) {
  if (c.out == "json") {
    out << Json{{"metadata", r.metadata}, {"result", r.result}}.dump(2) << '\n';
    return;
  }
  if (c.out == "csv") {
    for (const auto& [k, v] : r.metadata.items()) out << "# " << k << ": " << v.dump() << '\n';
    for (const auto& [k, v] : r.result.items())
      if (v.is_primitive()) out << "# " << k << ": " << v.dump() << '\n';
    for (std::size_t i = 0; i < r.table.columns.size(); ++i) out << (i ? "," : "") << r.table.columns[i];
    out << '\n';
    for (const auto& row : r.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }
  std::filesystem::create_directories(c.plot_dir);
  for (std::size_t k = 1; k < r.table.columns.size(); ++k) {
    const auto path = std::filesystem::path(c.plot_dir) / (stem + "_" + r.table.columns[k] + ".csv");
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    f << "x,y\n";
    for (const auto& row : r.table.rows) f << row[0] << ',' << row[k] << '\n';
    out << path.string() << '\n';
  }
}

BodyInput body_from_options(const std::string& ellipsoid, const std::string& body_file) {
  if (!ellipsoid.empty() && !body_file.empty()) throw InputError("give either --ellipsoid or --body, not both");
  if (!ellipsoid.empty()) return body_from_ellipsoid(parse_ellipsoid_list(ellipsoid));
  if (!body_file.empty()) return load_body(body_file);
  throw InputError("a body is required (--ellipsoid or --body)");
}

Ellipsoid require_ellipsoid(const BodyInput& in, const std::string& command) {
  if (!in.ellipsoid) throw InputError(command + " needs an ellipsoid");
  return *in.ellipsoid;
}

Action parse_action(const std::string& text, const Ellipsoid& e) {
  if (e.is_exact() && is_rational_literal(text)) return Action(parse_rational(text));
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw InputError("");
    return Action(v);
  } catch (const std::exception&) {
    throw InputError("malformed action bound '" + text + "'");
  }
}

Report spectrum_report(const Ellipsoid& e, const Action& max) {
  const Spectrum s = action_spectrum(e, max);
  Report r;
  r.metadata = base_metadata("spectrum", arithmetic_name(s.mode));
  r.metadata["tolerances"] = {{"tol_merge", s.tol_merge}};
  r.result = spectrum_to_json(e, s, max);
  r.table.columns = {"tau", "multiplicity", "morse", "nullity", "cz"};
  for (const auto& x : s.entries) {
    r.table.rows.push_back({cell(x.tau), std::to_string(x.multiplicity), std::to_string(x.morse_index),
                            std::to_string(x.nullity), std::to_string(x.cz_index)});
  }
  return r;
}

Report invariants_report(const Ellipsoid& e, std::size_t count) {
  const auto c = spectral_invariants(e, count);
  Report r;
  r.metadata = base_metadata("invariants", arithmetic_name(e.mode()));
  r.metadata["tolerances"] = {{"tol_merge", e.is_exact() ? 0.0 : kTolMerge}};
  Json values = Json::array();
  for (const auto& x : c) values.push_back(to_json(x));
  r.result = {{"n", e.n()}, {"count", count}, {"invariants", values}};
  r.table.columns = {"i", "c_i"};
  for (std::size_t i = 0; i < c.size(); ++i) r.table.rows.push_back({std::to_string(i), cell(c[i])});
  return r;
}

/// Scan of c_0..c_{count-1}; the same code serves ellipsoids and ingested
/// spectrum files.
Report classify_report(const std::optional<Ellipsoid>& e, const std::vector<Action>& c, int n, Arithmetic mode,
                       std::size_t requested) {
  Report r;
  r.metadata = base_metadata("classify", arithmetic_name(mode));
  r.metadata["tolerances"] = {{"tol_eq", mode == Arithmetic::exact ? 0.0 : kTolEq}};
  const auto hits = besse_by_invariants(c, n);
  const bool zoll = c.size() >= static_cast<std::size_t>(n) && zoll_by_invariants(c, n);
  const std::string verdict = zoll ? "Zoll" : (hits.empty() ? "undecided" : "Besse");
  Json values = Json::array();
  for (const auto& x : c) values.push_back(to_json(x));
  r.result = {{"n", n},
              {"verdict", verdict},
              {"invariants_scanned", c.size()},
              {"invariants_requested", requested},
              {"invariants", values},
              {"hits", hits_to_json(hits)}};
  if (hits.empty()) r.result["note"] = "no equality c_i = c_{i+n-1} among the scanned invariants";
  if (mode == Arithmetic::exact) {
    const auto s = besse_sufficient_eh(c, n, true);
    r.result["sufficient_condition"] = {{"tag", s.tag}, {"besse", s.besse}, {"degenerate", s.degenerate}};
  }
  if (e) {
    const Classification cl = classify(*e);
    Json cj = {{"verdict", to_string(cl.verdict)}, {"heuristic", cl.heuristic}, {"note", cl.note}};
    if (cl.minimal_period) cj["minimal_period"] = to_json(*cl.minimal_period);
    if (cl.heuristic) cj["denominator_bound"] = cl.denominator_bound;
    r.result["parameters"] = cj;
  }
  r.table.columns = {"i", "tau", "mu"};
  for (const auto& h : hits) r.table.rows.push_back({std::to_string(h.i), cell(h.tau), std::to_string(h.mu)});
  return r;
}

Report pinch_report(const BodyInput& in, double delta, bool attest) {
  Report r;
  PinchingCertificate cert;
  if (in.ellipsoid) {
    const Ellipsoid& e = *in.ellipsoid;
    const double rr = std::sqrt(e.params().front() / std::numbers::pi);
    const double RR = std::sqrt(e.params().back() / std::numbers::pi);
    const double bound = delta * delta * e.params().front() * (1.0 + 1e-9);
    const Spectrum s = action_spectrum(e, bound);
    std::vector<Action> values;
    for (const auto& x : s.entries) values.push_back(x.tau);
    const SpectrumCoverage cov{true, bound, "exact ellipsoid spectrum"};
    cert = zoll_by_pinching(rr, RR, values, cov, delta, spectral_invariants(e, e.n()), static_cast<int>(e.n()));
    r.metadata = base_metadata("pinch", arithmetic_name(e.mode()));
    r.metadata["coverage"] = {{"attested", true}, {"source", cov.source}, {"bound", bound}};
  } else {
    const ConvexBody& body = in.convex();
    const PinchingRadii radii = pinching_radii(body);
    // sys <= pi R^2, so orbits up to delta^2 pi R^2 cover (0, delta^2 sys].
    OrbitSearchOptions opts;
    opts.t_max = delta * delta * std::numbers::pi * radii.R * radii.R;
    const auto found = find_closed_orbits(body, opts);
    std::vector<Action> values;
    for (const auto& m : found.multiples)
      for (double t : m) values.push_back(Action(t));
    const SpectrumCoverage cov{attest, opts.t_max, "orbit search"};
    cert = zoll_by_pinching(radii.r, radii.R, values, cov, delta, {}, body.n());
    r.metadata = base_metadata("pinch", "numerical");
    r.metadata["coverage"] = {{"attested", attest}, {"source", cov.source}, {"bound", opts.t_max}};
    r.metadata["radii_flagged"] = radii.flagged;
  }
  r.metadata["tolerances"] = {{"chain", cert.tol}};
  r.result = certificate_to_json(cert);
  r.table.columns = {"index", "witness"};
  for (std::size_t i = 0; i < cert.witnesses.size(); ++i)
    r.table.rows.push_back({std::to_string(i), cell(cert.witnesses[i])});
  return r;
}

Report systole_report(const BodyInput& in, const ClarkeConfig& cfg) {
  const ClarkeResult res = minimize(in.convex(), cfg);
  Report r;
  r.metadata = base_metadata("systole", "numerical");
  r.metadata["tolerances"] = {{"gradient", cfg.gradient_tolerance}, {"top_mode_limit", cfg.top_mode_limit}};
  r.metadata["modes"] = cfg.modes;
  r.result = clarke_to_json(res);
  r.table.columns = {"start", "action", "gradient_norm"};
  for (std::size_t i = 0; i < res.starts.size(); ++i)
    r.table.rows.push_back({std::to_string(i), fmt(res.starts[i].action), fmt(res.starts[i].gradient_norm)});
  return r;
}

Report orbits_report(const BodyInput& in, const OrbitSearchOptions& opts, double alpha) {
  const ConvexBody& body = in.convex();
  auto found = find_closed_orbits(body, opts);
  Report r;
  r.metadata = base_metadata("orbits", "numerical");
  r.metadata["tolerances"] = {{"tol_orbit", opts.tol_orbit}, {"dedup_tol", opts.dedup_tol}};
  r.metadata["t_max"] = opts.t_max;
  Json orbits = Json::array();
  r.table.columns = {"period", "cz", "morse", "nullity", "residual"};
  for (auto& o : found.orbits) {
    o = monodromy_and_index(body, o, alpha);
    orbits.push_back(orbit_to_json(o));
    r.table.rows.push_back({fmt(o.period), std::to_string(o.cz), std::to_string(o.morse),
                            std::to_string(o.nullity), fmt(o.residual)});
  }
  r.result = {{"orbits", orbits}, {"multiples", found.multiples}, {"seeds", found.seeds}, {"log", found.log}};
  return r;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(is_rational_literal(item) ? to_double(parse_rational(item)) : std::stod(item, &pos));
      if (!is_rational_literal(item) && pos != item.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("malformed number '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

Report cz_report(const SymplecticPath& path, const std::string& provenance) {
  const CzResult res = conley_zehnder(path);
  Report r;
  r.metadata = base_metadata("cz", provenance);
  r.metadata["tolerances"] = {{"tol_ker", CzOptions{}.tol_ker}};
  Json crossings = Json::array();
  r.table.columns = {"time", "kernel_dim", "signature"};
  for (const auto& c : res.crossings) {
    crossings.push_back({{"time", c.time}, {"kernel_dim", c.kernel_dim}, {"signature", c.signature_contribution}});
    r.table.rows.push_back({fmt(c.time), std::to_string(c.kernel_dim), std::to_string(c.signature_contribution)});
  }
  r.result = {{"cz", res.index},
              {"morse", morse_index_from_path(path)},
              {"nullity", cz_nullity(path).nullity},
              {"degenerate", res.degenerate},
              {"eps_used", res.eps_used},
              {"crossings", crossings}};
  return r;
}

Report bott_report(const CrossModel& model, int m_max, double ell, std::optional<int> degree,
                   const std::string& betti) {
  Report r;
  r.metadata = base_metadata("bott", "exact");
  Json rows = Json::array();
  r.table.columns = {"m", "ind", "nul", "deg_alpha", "deg_beta", "action"};
  for (const auto& row : bott_table(model, m_max, ell)) {
    rows.push_back(bott_row_to_json(row));
    r.table.rows.push_back({std::to_string(row.m), std::to_string(row.bott.index), std::to_string(row.bott.nullity),
                            std::to_string(row.degrees.alpha), std::to_string(row.degrees.beta), fmt(row.action)});
  }
  r.result = {{"model", model.name()},
              {"n", model.n()},
              {"i_M", model.initial_index()},
              {"simply_connected", model.simply_connected()},
              {"spin", model.spin()},
              {"ell", ell},
              {"table", rows}};
  if (degree) {
    std::vector<std::int64_t> b;
    if (!betti.empty()) {
      for (double x : parse_list(betti)) b.push_back(static_cast<std::int64_t>(x));
    } else if (model.family() == CrossFamily::sphere) {
      b = sphere_quotient_betti(model.n());
    } else {
      throw InputError("--betti is required for models other than spheres");
    }
    r.result["rank"] = {{"degree", *degree}, {"quotient_betti", b}, {"rank", cohomology_rank(model, *degree, b)}};
  }
  return r;
}

void apply_thread_cap() {
  const char* env = std::getenv("REEB_SPECTRA_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw InputError("REEB_SPECTRA_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(v));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Action spectra, spectral invariants and index computations for convex contact spheres",
               "reeb-spectra"};
  app.require_subcommand(1);
  Common common;
  std::string ellipsoid, body_file;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output format")->check(CLI::IsMember({"json", "csv", "plot"}));
    sub->add_option("--plot-dir", common.plot_dir, "Directory for plot series files");
  };
  auto add_body = [&](CLI::App* sub) {
    sub->add_option("--ellipsoid", ellipsoid, "Comma-separated parameters a_1,...,a_n");
    sub->add_option("--body", body_file, "Body JSON file");
  };

  std::string max_text;
  auto* spectrum = app.add_subcommand("spectrum", "Ellipsoid action spectrum with indices");
  add_body(spectrum);
  add_common(spectrum);
  spectrum->add_option("--max", max_text, "Largest action")->required();

  std::size_t count = 0;
  auto* invariants = app.add_subcommand("invariants", "Spectral invariants c_0, c_1, ...");
  add_body(invariants);
  add_common(invariants);
  invariants->add_option("--count", count, "Number of invariants")->required()->check(CLI::PositiveNumber);

  std::string spectrum_file;
  auto* classify_cmd = app.add_subcommand("classify", "Besse/Zoll scan of the spectral invariants");
  add_body(classify_cmd);
  add_common(classify_cmd);
  classify_cmd->add_option("--spectrum", spectrum_file, "Spectrum JSON produced by 'spectrum --out json'");
  classify_cmd->add_option("--count", count, "Number of invariants to scan")->check(CLI::PositiveNumber);

  double delta = std::numbers::sqrt2;
  bool attest = false;
  auto* pinch = app.add_subcommand("pinch", "Zoll certificate from pinching radii");
  add_body(pinch);
  add_common(pinch);
  pinch->add_option("--delta", delta, "Pinching constant in (1, sqrt 2]");
  pinch->add_flag("--attest-coverage", attest, "Vouch that the orbit search finds every period up to the bound");

  ClarkeConfig clarke;
  auto* systole = app.add_subcommand("systole", "Systole by minimizing the dual action functional");
  add_body(systole);
  add_common(systole);
  systole->add_option("--modes", clarke.modes, "Fourier modes")->check(CLI::PositiveNumber);
  systole->add_option("--oversample", clarke.oversample, "Quadrature oversampling")->check(CLI::PositiveNumber);
  systole->add_option("--starts", clarke.random_starts, "Random starts")->check(CLI::NonNegativeNumber);
  systole->add_option("--seed", clarke.seed, "Random seed");
  bool no_doubling = false;
  systole->add_flag("--no-doubling", no_doubling, "Skip the 2K-mode re-solve");

  OrbitSearchOptions search;
  double alpha = ConvexBody::default_alpha;
  auto* orbits = app.add_subcommand("orbits", "Closed Reeb orbits by shooting, with indices");
  add_body(orbits);
  add_common(orbits);
  orbits->add_option("--tmax", search.t_max, "Largest period")->check(CLI::PositiveNumber);
  orbits->add_option("--seeds", search.sobol_seeds, "Quasi-random seeds")->check(CLI::NonNegativeNumber);
  orbits->add_option("--alpha", alpha, "Homogeneity degree for the index path")->check(CLI::Range(1.0, 2.0));

  std::string rotation;
  double total_time = 1.0;
  std::optional<double> tau;
  auto* cz = app.add_subcommand("cz", "Conley-Zehnder index of a rotation or ellipsoid path");
  add_common(cz);
  cz->add_option("--rotation", rotation, "Comma-separated rotation rates, one per 2x2 block");
  cz->add_option("--time", total_time, "Total time");
  cz->add_option("--ellipsoid", ellipsoid, "Ellipsoid parameters (with --tau)");
  cz->add_option("--tau", tau, "Period along the ellipsoid orbit");

  std::string model_name = "S", betti;
  int model_dim = 2, m_max = 10;
  double ell = 2.0 * std::numbers::pi;
  std::optional<int> degree;
  auto* bott = app.add_subcommand("bott", "Bott iteration and class-degree tables");
  add_common(bott);
  bott->add_option("--model", model_name, "S, RP, CP, HP or CaP");
  bott->add_option("--dim", model_dim, "Real dimension n");
  bott->add_option("--mmax", m_max, "Largest iterate")->check(CLI::PositiveNumber);
  bott->add_option("--ell", ell, "Minimal period of the Zoll metric")->check(CLI::PositiveNumber);
  bott->add_option("--degree", degree, "Degree for the equivariant cohomology rank");
  bott->add_option("--betti", betti, "Betti numbers of SM/S^1, comma-separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    apply_thread_cap();
    Report report;
    std::string stem;
    if (spectrum->parsed()) {
      const Ellipsoid e = require_ellipsoid(body_from_options(ellipsoid, body_file), "spectrum");
      report = spectrum_report(e, parse_action(max_text, e));
      stem = "spectrum";
    } else if (invariants->parsed()) {
      report = invariants_report(require_ellipsoid(body_from_options(ellipsoid, body_file), "invariants"), count);
      stem = "invariants";
    } else if (classify_cmd->parsed()) {
      if (!spectrum_file.empty()) {
        if (!ellipsoid.empty() || !body_file.empty()) throw InputError("give either a body or --spectrum");
        const SpectrumInput s = spectrum_from_json(read_json_file(spectrum_file));
        std::size_t available = 0;
        for (const auto& x : s.entries) available += static_cast<std::size_t>(x.multiplicity);
        const std::size_t want = count ? count : available;
        report = classify_report(s.ellipsoid, invariants_from_spectrum(s.entries, want), s.n, s.mode, want);
        if (want > available) report.result["note_coverage"] = "spectrum file holds fewer invariants than requested";
      } else {
        const Ellipsoid e = require_ellipsoid(body_from_options(ellipsoid, body_file), "classify");
        const std::size_t want = count ? count : 4 * e.n();
        report = classify_report(e, spectral_invariants(e, want), static_cast<int>(e.n()), e.mode(), want);
      }
      stem = "classify";
    } else if (pinch->parsed()) {
      report = pinch_report(body_from_options(ellipsoid, body_file), delta, attest);
      stem = "pinch";
    } else if (systole->parsed()) {
      clarke.doubling_check = !no_doubling;
      report = systole_report(body_from_options(ellipsoid, body_file), clarke);
      stem = "systole";
    } else if (orbits->parsed()) {
      report = orbits_report(body_from_options(ellipsoid, body_file), search, alpha);
      stem = "orbits";
    } else if (cz->parsed()) {
      if (!rotation.empty()) {
        const auto rates = parse_list(rotation);
        report = cz_report(rotation_path(rates, total_time), "closed-form path");
      } else if (!ellipsoid.empty() && tau) {
        report = cz_report(ellipsoid_rotation_path(parse_ellipsoid_list(ellipsoid), *tau), "closed-form path");
      } else {
        throw InputError("cz needs --rotation, or --ellipsoid with --tau");
      }
      stem = "cz";
    } else if (bott->parsed()) {
      report = bott_report(CrossModel(parse_cross_family(model_name), model_dim), m_max, ell, degree, betti);
      stem = "bott";
    }
    emit(report, common, stem, out);
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace reeb
