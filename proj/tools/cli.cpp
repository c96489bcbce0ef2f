#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cheshire/angle.hpp"
#include "cheshire/cheshire_single.hpp"
#include "cheshire/circuit_parser.hpp"
#include "cheshire/optical_network.hpp"
#include "cheshire/weakvalue.hpp"
#include "cheshire/wp_states.hpp"

namespace cheshire::cli {
namespace {

constexpr double kCheckTol = 1e-10;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON numbers carry the same 10 significant digits as the text formats.
double rounded(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

nlohmann::json complex_json(Complex z) { return {{"re", rounded(z.real())}, {"im", rounded(z.imag())}}; }

double angle_arg(const std::string& text, const char* flag, bool degrees) {
  const auto value = parse_angle(text);
  if (!value) throw UsageError(std::string("invalid angle for ") + flag + ": '" + text + "'");
  return degrees ? *value * std::numbers::pi / 180.0 : *value;
}

bool emit(const std::string& text, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (out_path.empty()) {
    out << text;
    return true;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    err << "error: cannot write '" << out_path << "'\n";
    return false;
  }
  return true;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

struct Common {
  std::string format = "text";
  std::string out_path;
  bool degrees = false;
};

// ---------------------------------------------------------------------------

int cmd_qcc(const Common& opts, std::ostream& out, std::ostream& err) {
  const auto reports = qcc_weak_values();
  const bool pass = matches_qcc_pattern(reports, kCheckTol);
  std::ostringstream os;
  if (opts.format == "json") {
    nlohmann::json j;
    j["weak_values"] = nlohmann::json::array();
    for (const auto& r : reports) {
      j["weak_values"].push_back({{"observable", r.observable_name}, {"value", complex_json(r.value)}});
    }
    j["overlap"] = complex_json(reports.front().overlap);
    j["status"] = pass ? "PASS" : "FAIL";
    os << j.dump(2) << "\n";
  } else if (opts.format == "csv") {
    os << "observable,re,im\n";
    for (const auto& r : reports) {
      os << r.observable_name << "," << format_real(r.value.real()) << "," << format_real(r.value.imag()) << "\n";
    }
  } else {
    os << pad("observable", 12) << pad("re", 18) << "im\n";
    for (const auto& r : reports) {
      os << pad(r.observable_name, 12) << pad(format_real(r.value.real()), 18) << format_real(r.value.imag()) << "\n";
    }
    os << "status: " << (pass ? "PASS" : "FAIL") << "\n";
  }
  if (!emit(os.str(), opts.out_path, out, err)) return kExitCheckFailed;
  return pass ? kExitOk : kExitCheckFailed;
}

struct WeakValueArgs {
  std::string alpha;
  std::string phi1 = "0";
  std::string phi1p = "0";
};

int cmd_weakvalues(const Common& opts, const WeakValueArgs& a, std::ostream& out, std::ostream& err) {
  const WpParams params{angle_arg(a.alpha, "--alpha", opts.degrees), angle_arg(a.phi1, "--phi1", opts.degrees),
                        angle_arg(a.phi1p, "--phi1p", opts.degrees)};
  const auto reports = separation_weak_values(params);
  const auto sums = complementarity_sums(reports);
  const bool pass = std::abs(sums.photon1 - 1.0) <= kCheckTol && std::abs(sums.photon2 - 1.0) <= kCheckTol;

  std::ostringstream os;
  if (opts.format == "json") {
    nlohmann::json j;
    j["alpha"] = rounded(params.alpha);
    j["phi1"] = rounded(params.phi1);
    j["phi1p"] = rounded(params.phi1p);
    j["weak_values"] = nlohmann::json::array();
    for (const auto& r : reports) {
      j["weak_values"].push_back({{"observable", r.observable_name}, {"value", complex_json(r.value)}});
    }
    j["sum_photon1"] = complex_json(sums.photon1);
    j["sum_photon2"] = complex_json(sums.photon2);
    j["success_probability"] = rounded(reports.front().success_probability);
    j["status"] = pass ? "PASS" : "FAIL";
    os << j.dump(2) << "\n";
  } else if (opts.format == "csv") {
    os << "observable,re,im\n";
    for (const auto& r : reports) {
      os << r.observable_name << "," << format_real(r.value.real()) << "," << format_real(r.value.imag()) << "\n";
    }
    os << "sum_photon1," << format_real(sums.photon1.real()) << "," << format_real(sums.photon1.imag()) << "\n";
    os << "sum_photon2," << format_real(sums.photon2.real()) << "," << format_real(sums.photon2.imag()) << "\n";
  } else {
    os << "alpha = " << format_real(params.alpha) << "\n";
    os << pad("observable", 12) << pad("re", 18) << "im\n";
    for (const auto& r : reports) {
      os << pad(r.observable_name, 12) << pad(format_real(r.value.real()), 18) << format_real(r.value.imag()) << "\n";
    }
    os << "sum_photon1 = " << format_real(sums.photon1.real()) << "\n";
    os << "sum_photon2 = " << format_real(sums.photon2.real()) << "\n";
    os << "status: " << (pass ? "PASS" : "FAIL") << "\n";
  }
  if (!emit(os.str(), opts.out_path, out, err)) return kExitCheckFailed;
  return pass ? kExitOk : kExitCheckFailed;
}

struct SweepArgs {
  std::string alpha_start = "0";
  std::string alpha_end = "pi/2";
  int steps = 101;
  std::string phi1 = "0";
  std::string phi1p = "0";
};

struct SweepRow {
  double alpha, w_r1, p_l1, wp_l2, pp_r2, sum1, sum2, p_d5;
};

int cmd_sweep(const Common& opts, const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const double start = angle_arg(a.alpha_start, "--alpha-start", opts.degrees);
  const double end = angle_arg(a.alpha_end, "--alpha-end", opts.degrees);
  const double phi1 = angle_arg(a.phi1, "--phi1", opts.degrees);
  const double phi1p = angle_arg(a.phi1p, "--phi1p", opts.degrees);
  if (a.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(start < end)) throw UsageError("--alpha-start must be below --alpha-end");

  std::vector<SweepRow> rows;
  bool pass = true;
  for (int i = 0; i < a.steps; ++i) {
    const double alpha = (i == a.steps - 1) ? end : start + (end - start) * i / (a.steps - 1);
    const WpParams params{alpha, phi1, phi1p};
    const auto wv = separation_weak_values(params);
    const auto sums = complementarity_sums(wv);
    const auto detection = run_postselection_pipeline(make_preselected(params, Representation::Mode), params);
    rows.push_back({alpha, find_weak_value(wv, Arm::R1, Attribute::W).real(),
                    find_weak_value(wv, Arm::L1, Attribute::P).real(),
                    find_weak_value(wv, Arm::L2, Attribute::Wp).real(),
                    find_weak_value(wv, Arm::R2, Attribute::Pp).real(), sums.photon1.real(), sums.photon2.real(),
                    detection.detector_probs.at("D5")});
    pass = pass && std::abs(sums.photon1 - 1.0) <= kCheckTol && std::abs(sums.photon2 - 1.0) <= kCheckTol;
  }

  std::ostringstream os;
  if (opts.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      j.push_back({{"alpha", rounded(r.alpha)},
                   {"wv_W_R1", rounded(r.w_r1)},
                   {"wv_P_L1", rounded(r.p_l1)},
                   {"wv_Wp_L2", rounded(r.wp_l2)},
                   {"wv_Pp_R2", rounded(r.pp_r2)},
                   {"sum_photon1", rounded(r.sum1)},
                   {"sum_photon2", rounded(r.sum2)},
                   {"p_D5", rounded(r.p_d5)}});
    }
    os << j.dump(2) << "\n";
  } else {
    os << "alpha,wv_W_R1,wv_P_L1,wv_Wp_L2,wv_Pp_R2,sum_photon1,sum_photon2,p_D5\n";
    for (const auto& r : rows) {
      os << format_real(r.alpha) << "," << format_real(r.w_r1) << "," << format_real(r.p_l1) << ","
         << format_real(r.wp_l2) << "," << format_real(r.pp_r2) << "," << format_real(r.sum1) << ","
         << format_real(r.sum2) << "," << format_real(r.p_d5) << "\n";
    }
  }
  if (!emit(os.str(), opts.out_path, out, err)) return kExitCheckFailed;
  return pass ? kExitOk : kExitCheckFailed;
}

struct PostselectArgs {
  std::string alpha;
  std::string phi1 = "0";
  std::string phi1p = "0";
  std::string circuit;
};

int cmd_postselect(const Common& opts, const PostselectArgs& a, std::ostream& out, std::ostream& err) {
  const WpParams params{angle_arg(a.alpha, "--alpha", opts.degrees), angle_arg(a.phi1, "--phi1", opts.degrees),
                        angle_arg(a.phi1p, "--phi1p", opts.degrees)};

  std::optional<Circuit> circuit;
  if (a.circuit.empty()) {
    circuit = build_fig1_circuit(params);
  } else {
    try {
      circuit = build_circuit(parse_circuit_file(a.circuit));
    } catch (const ParseError& e) {
      err << a.circuit << ":" << e.what() << "\n";
      return kExitUsage;
    }
  }
  DetectionResult result = simulate(*circuit, make_preselected(params, Representation::Mode));
  const bool pass = std::abs(result.total_probability() - 1.0) <= kCheckTol;

  std::ostringstream os;
  if (opts.format == "json") {
    nlohmann::json j;
    j["alpha"] = rounded(params.alpha);
    j["detectors"] = nlohmann::json::object();
    for (const auto& [name, p] : result.detector_probs) j["detectors"][name] = rounded(p);
    j["trace"] = nlohmann::json::array();
    for (const auto& t : result.trace) j["trace"].push_back({{"element", t.element}, {"norm_after", rounded(t.norm_after)}});
    j["status"] = pass ? "PASS" : "FAIL";
    os << j.dump(2) << "\n";
  } else {
    os << "alpha = " << format_real(params.alpha) << "\n";
    for (const auto& [name, p] : result.detector_probs) os << name << "=" << format_real(p) << "\n";
    os << "trace:\n";
    for (const auto& t : result.trace) os << "  " << pad(t.element, 36) << "norm=" << format_real(t.norm_after) << "\n";
    os << "status: " << (pass ? "PASS" : "FAIL") << "\n";
  }
  if (!emit(os.str(), opts.out_path, out, err)) return kExitCheckFailed;
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_parse(const Common& opts, const std::string& path, bool render, std::ostream& out, std::ostream& err) {
  CircuitDoc doc;
  try {
    doc = parse_circuit_file(path);
  } catch (const ParseError& e) {
    err << path << ":" << e.what() << "\n";
    return kExitUsage;
  }
  std::string text = render ? render_circuit(doc)
                            : "ok: " + doc.source_name + ": " + std::to_string(doc.declarations.size()) +
                                  " spaces, " + std::to_string(doc.elements.size()) + " elements\n";
  return emit(text, opts.out_path, out, err) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak values and post-selection network for the wave-particle Cheshire cat", "cheshire"};
  app.require_subcommand(1);

  const auto add_common = [](CLI::App* sub, Common& opts, std::vector<std::string> formats) {
    opts.format = formats.front();
    sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--out", opts.out_path, "Write output to this file instead of stdout");
    sub->add_flag("--degrees", opts.degrees, "Interpret angle arguments in degrees");
  };

  Common qcc_opts;
  auto* qcc = app.add_subcommand("qcc", "Single-photon Cheshire cat weak values");
  add_common(qcc, qcc_opts, {"text", "csv", "json"});

  Common wv_opts;
  WeakValueArgs wv;
  auto* weakvalues = app.add_subcommand("weakvalues", "Eight arm/attribute weak values at one alpha");
  add_common(weakvalues, wv_opts, {"text", "csv", "json"});
  weakvalues->add_option("--alpha", wv.alpha, "HWP angle (radians, pi literals accepted)")->required();
  weakvalues->add_option("--phi1", wv.phi1, "Photon-1 toolbox phase");
  weakvalues->add_option("--phi1p", wv.phi1p, "Photon-2 toolbox phase");

  Common sweep_opts;
  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Weak values and D5 probability over an alpha grid");
  add_common(sweep, sweep_opts, {"csv", "json"});
  sweep->add_option("--alpha-start", sw.alpha_start, "First grid angle");
  sweep->add_option("--alpha-end", sw.alpha_end, "Last grid angle");
  sweep->add_option("--steps", sw.steps, "Number of grid points (>= 2)");
  sweep->add_option("--phi1", sw.phi1, "Photon-1 toolbox phase");
  sweep->add_option("--phi1p", sw.phi1p, "Photon-2 toolbox phase");

  Common ps_opts;
  PostselectArgs ps;
  auto* postselect = app.add_subcommand("postselect", "Propagate the pre-selected state through the network");
  add_common(postselect, ps_opts, {"text", "json"});
  postselect->add_option("--alpha", ps.alpha, "HWP angle (radians, pi literals accepted)")->required();
  postselect->add_option("--phi1", ps.phi1, "Photon-1 toolbox phase");
  postselect->add_option("--phi1p", ps.phi1p, "Photon-2 toolbox phase");
  postselect->add_option("--circuit", ps.circuit, "Simulate this .circuit file instead of the built-in network");

  Common parse_opts;
  std::string parse_path;
  bool render = false;
  auto* parse = app.add_subcommand("parse", "Syntax-check a .circuit file");
  parse->add_option("file", parse_path, "Circuit file")->required();
  parse->add_flag("--render", render, "Print the canonical form");
  parse->add_option("--out", parse_opts.out_path, "Write output to this file instead of stdout");

  std::vector<const char*> argv{"cheshire"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*qcc) return cmd_qcc(qcc_opts, out, err);
    if (*weakvalues) return cmd_weakvalues(wv_opts, wv, out, err);
    if (*sweep) return cmd_sweep(sweep_opts, sw, out, err);
    if (*postselect) return cmd_postselect(ps_opts, ps, out, err);
    if (*parse) return cmd_parse(parse_opts, parse_path, render, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace cheshire::cli
