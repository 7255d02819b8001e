// flowmesher: mesh a triangulated OBJ domain with particle flow.

#include "flowmesher/error.hpp"
#include "flowmesher/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fm = flowmesher;

namespace {

std::vector<double> split_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::string s = text;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw fm::InputError(fmt::format("{}: '{}' is not a number", what, tok));
    out.push_back(v);
  }
  return out;
}

fm::FixedNode parse_fixed(const std::string& text) {
  const auto v = split_numbers(text, "--fixed");
  if (v.size() != 3 && v.size() != 4) throw fm::InputError("--fixed expects x,y,z[,h_local]");
  fm::FixedNode f{fm::Vec3(v[0], v[1], v[2]), std::nullopt};
  if (v.size() == 4) f.size = v[3];
  return f;
}

std::vector<fm::Anchor> read_anchors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fm::IoError("cannot open anchor file " + path);
  std::vector<fm::Anchor> anchors;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    const auto v = split_numbers(line, path);
    if (v.size() != 4) throw fm::ParseError("anchor rows are x y z h", n);
    anchors.push_back({fm::Vec3(v[0], v[1], v[2]), v[3]});
  }
  return anchors;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unstructured triangle/tetrahedron meshing by particle flow"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "Key-value configuration file");

  std::string input;
  std::string output = ".";
  std::optional<double> h;
  std::vector<std::string> fixed;
  std::string anchors_file;
  std::string preset;
  std::string preset_params;
  fm::FlowConfig flow;
  bool no_postopt = false;
  bool verbose = false;

  app.add_option("input", input, "Domain boundary as a triangulated OBJ file")->required();
  app.add_option("-o,--output", output, "Output directory")->capture_default_str();
  app.add_option("--h", h, "Target edge length");
  app.add_option("--seed", flow.seed, "Random seed")->capture_default_str();
  app.add_option("--fixed", fixed, "Fixed node x,y,z[,h_local] (repeatable)");
  app.add_option("--anchors", anchors_file, "File of size anchors, one 'x y z h' row each");
  app.add_option("--preset", preset, "Named size law: radial-linear");
  app.add_option("--preset-params", preset_params, "radial-linear: r,inner_radius,falloff[,cx,cy]");
  app.add_option("--kv", flow.k_v, "Damping coefficient")->capture_default_str();
  app.add_option("--kp", flow.k_p, "Count controller gain")->capture_default_str();
  app.add_option("--ks", flow.k_s, "Repulsion stiffness (default 0.1 h_min)");
  app.add_option("--dt", flow.dt, "Time step")->capture_default_str();
  app.add_option("--max-steps", flow.max_steps, "Step cap")->capture_default_str();
  app.add_option("--injection-speed", flow.injection_speed, "Initial particle speed (default 0.1 h_min/dt)");
  app.add_flag("--no-postopt", no_postopt, "Skip 3D post-optimization");
  app.add_flag("-v,--verbose", verbose, "Print progress");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    fm::RunConfig cfg;
    cfg.input = input;
    cfg.output_dir = output;
    cfg.h = h;
    for (const auto& f : fixed) cfg.fixed.push_back(parse_fixed(f));
    if (!anchors_file.empty()) cfg.anchors = read_anchors(anchors_file);
    if (!preset.empty()) {
      if (preset != "radial-linear") throw fm::InputError("unknown size preset '" + preset + "'");
      fm::RadialLinear law;
      const auto p = split_numbers(preset_params, "--preset-params");
      if (p.size() >= 1) law.r = p[0];
      if (p.size() >= 2) law.inner_radius = p[1];
      if (p.size() >= 3) law.falloff = p[2];
      if (p.size() >= 5) law.center = fm::Vec3(p[3], p[4], 0.0);
      if (p.size() == 4 || p.size() > 5) throw fm::InputError("--preset-params expects 3 or 5 values");
      cfg.radial = law;
    }
    cfg.flow = flow;
    cfg.postopt = !no_postopt;
    cfg.verbose = verbose;

    const fm::RunResult result = fm::run_pipeline(cfg);
    fm::write_outputs(cfg, result);
    if (verbose) {
      fmt::print("{} nodes, {} elements, e_avg {:+.4f}, angles [{:.2f}, {:.2f}]\n", result.mesh.nodes.size(),
                 result.mesh.num_elements(), result.report.e_avg, result.report.min_angle, result.report.max_angle);
    }
    if (!result.converged) {
      fmt::print(stderr, "warning: run did not converge (flow ratio {:.5f})\n", result.flow.last_ratio);
      return 2;
    }
    return 0;
  } catch (const fm::Error& e) {
    fmt::print(stderr, "flowmesher: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "flowmesher: unexpected error: {}\n", e.what());
    return 1;
  }
}
