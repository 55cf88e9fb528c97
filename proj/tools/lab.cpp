#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>

#include "bjlab/bjlab.hpp"

using namespace bjlab;

namespace {

const char* kLastReport = "lab_last_report.json";

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LabError("io", "cannot read " + path);
  return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw LabError("io", "cannot write " + path);
  out << text;
  if (!out) throw LabError("io", "write failed for " + path);
}

// stdout always; --out and the session file when given
void emit(const nlohmann::json& j, const std::string& out, bool persist) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) write_text(out, text);
  if (persist) write_text(kLastReport, text);
}

int thread_cap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lab: Birkhoff-James orthogonality and dilation workbench"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string out;
  app.add_option("--seed", opt.seed, "random seed")->capture_default_str();
  app.add_option("--tol-scale", opt.tol_scale, "multiplies default tolerances")->capture_default_str();
  app.add_option("--horizon", opt.horizon, "override an entry's horizon (0 keeps the default)");
  app.add_option("--window", opt.window, "override an entry's window (0 keeps the default)");
  app.add_option("--out", out, "also write the output to this path");
  app.add_option("--inject-fault", opt.fault, "corrupt a construction (corrupt-V)")
      ->check(CLI::IsMember({"", "corrupt-V"}));

  std::string id;
  auto* example = app.add_subcommand("example", "run one gallery entry");
  example->add_option("id", id, "entry id")->required();

  std::string suite;
  auto* suite_cmd = app.add_subcommand("suite", "run a named suite");
  suite_cmd->add_option("name", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  std::string op_path;
  int depth = 6, kmax = 4;
  auto* dilate = app.add_subcommand("dilate", "build and verify the minimal isometric dilation");
  dilate->add_option("operator", op_path, "operator JSON")->required()->check(CLI::ExistingFile);
  dilate->add_option("--depth", depth, "number of blocks")->capture_default_str()->check(CLI::PositiveNumber);
  dilate->add_option("--kmax", kmax, "largest power checked")->capture_default_str();

  std::string sigma_path;
  int grid = 64;
  auto* spectrum = app.add_subcommand("spectrum", "probe approximate point spectrum of a sigma-shift");
  spectrum->add_option("sigma", sigma_path, "JSON {base: space, halfwidth: h, radii: [..]}")
      ->required()
      ->check(CLI::ExistingFile);
  spectrum->add_option("--grid", grid, "angles per radius")->capture_default_str()->check(CLI::PositiveNumber);

  std::string format = "json";
  auto* report = app.add_subcommand("report", "re-emit the last report");
  report->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  for (auto* sub : {example, suite_cmd, dilate, spectrum, report}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*example) {
      const ExampleReport r = run_counterexample(id, opt);
      emit(to_json(r), out, true);
      for (const auto& a : r.assertions)
        if (!a.pass) {
          std::cerr << "first failed assertion: " << a.name << " value=" << a.value << " tolerance=" << a.tolerance;
          if (!a.witness.empty()) std::cerr << " witness=" << a.witness;
          std::cerr << "\n";
          break;
        }
      if (!r.error.empty()) std::cerr << "error: " << r.error << "\n";
      return r.pass ? 0 : 1;
    }
    if (*suite_cmd) {
      const SuiteReport r = run_suite(suite, opt, thread_cap());
      emit(to_json(r), out, true);
      for (const auto& it : r.items)
        if (!it.pass) std::cerr << "FAIL " << it.id << "\n";
      return r.pass ? 0 : 1;
    }
    if (*dilate) {
      const Operator T = Operator::from_json(read_json(op_path));
      SearchOptions so;
      so.seed = opt.seed;
      const NormCertificate cert = triangle_violation_search(T, so);
      nlohmann::json j = {{"certificate", to_json(cert)}};
      if (cert.verdict == NormVerdict::violation) {
        emit(j, out, false);
        std::cerr << "A_T violates the triangle inequality; no dilation of this kind\n";
        return 1;
      }
      const DilationBundle b = build_min_dilation(T, cert, depth);
      const Certificate v = verify_dilation(b, kmax, 1e-10 * opt.tol_scale, opt.seed);
      j["construction"] = b.construction;
      j["depth"] = b.depth;
      j["V"] = b.V.to_json();
      j["W"] = b.W.to_json();
      j["P"] = b.P.to_json();
      j["verification"] = to_json(v);
      emit(j, out, false);
      return v.verdict == "pass" ? 0 : 1;
    }
    if (*spectrum) {
      const nlohmann::json j = read_json(sigma_path);
      const Space base = Space::from_json(j.at("base"));
      const int h = j.at("halfwidth").get<int>();
      const auto radii = j.value("radii", std::vector<double>{0.5, 1.0, 1.5});
      const SigmaShiftBundle b = make_sigma_shift(base, h);
      const int horizon = opt.horizon > 0 ? opt.horizon : h - 1;
      std::vector<SpectrumPoint> pts;
      for (double r : radii)
        for (int k = 0; k < grid; ++k)
          pts.push_back(spectrum_probe(b, std::polar(r, 2.0 * std::numbers::pi * k / grid), horizon, opt.seed));
      const std::string csv = spectrum_csv(pts);
      std::cout << csv;
      if (!out.empty()) write_text(out, csv);
      return 0;
    }
    if (*report) {
      const nlohmann::json j = read_json(kLastReport);
      const std::string text = format == "csv" ? report_csv(j) : j.dump(2) + "\n";
      std::cout << text;
      if (!out.empty()) write_text(out, text);
      return j.value("pass", false) ? 0 : 1;
    }
  } catch (const LabError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
