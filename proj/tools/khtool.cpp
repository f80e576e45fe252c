// Command line front end: homology, detection, census, Lee, Jones and the
// link Floer case search.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "khd/census.hpp"
#include "khd/detection.hpp"
#include "khd/diagram_io.hpp"
#include "khd/error.hpp"
#include "khd/hfl_search.hpp"
#include "khd/jones.hpp"
#include "khd/khovanov.hpp"

namespace {

khd::LinkDiagram read_diagram(const std::string& path) {
  if (path != "-") return khd::load_diagram_file(path);
  std::stringstream buffer;
  buffer << std::cin.rdbuf();
  return khd::load_diagram(buffer.str());
}

std::string lee_json(const khd::GradedRanks& r) {
  nlohmann::ordered_json doc;
  doc["ranks"] = nlohmann::ordered_json::array();
  for (const auto& [i, rank] : r.ranks) doc["ranks"].push_back({{"i", i}, {"rank", rank}});
  doc["total"] = r.total();
  return doc.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology and T(2,6) detection tools"};
  app.require_subcommand(1);

  std::string file;
  std::string out = "text";
  std::size_t workers = 1;
  auto add_common = [&](CLI::App* sub, bool with_file) {
    if (with_file) sub->add_option("file", file, "diagram file (PD or braid JSON), - for stdin")->required();
    sub->add_option("--out", out, "output format")->check(CLI::IsMember({"json", "text"}));
  };

  std::string ring = "Z";
  bool reduced = false;
  int basepoint = 0;
  auto* compute = app.add_subcommand("compute", "Khovanov homology of a diagram");
  add_common(compute, true);
  compute->add_option("--ring", ring, "coefficients: Z, Q, F2, F3, ...");
  compute->add_flag("--reduced", reduced, "reduced homology at the basepoint");
  compute->add_option("--basepoint", basepoint, "arc label carrying the basepoint");
  compute->add_option("--workers", workers, "threads for per-block reductions");

  auto* detect = app.add_subcommand("detect", "run the T(2,6) detection pipeline");
  add_common(detect, true);
  detect->add_option("--workers", workers, "threads for per-block reductions");

  auto* census = app.add_subcommand("census", "detection over every row of a census CSV");
  add_common(census, true);
  census->add_option("--workers", workers, "rows processed concurrently");

  auto* lee = app.add_subcommand("lee", "Lee homology ranks by homological grading");
  add_common(lee, true);

  auto* jones = app.add_subcommand("jones", "Jones polynomial from the bracket state sum");
  add_common(jones, true);

  std::string case_name;
  bool all = false;
  int samples = 2;
  bool lax = false;
  int extend = 0;
  auto* hfl = app.add_subcommand("hfl-cases", "link Floer case search");
  add_common(hfl, false);
  auto* case_opt = hfl->add_option("--case", case_name, "3/2, 5/2, 1/2, -1/2, -3/2, >5/2 or <-3/2");
  hfl->add_flag("--all", all, "all seven cases")->excludes(case_opt);
  hfl->add_option("--samples", samples, "representatives per open region")->check(CLI::PositiveNumber);
  hfl->add_flag("--lax", lax, "allow differentials that lower the off-axis grading");
  hfl->add_option("--extend", extend, "widen the grading window by this many steps")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  const bool json = out == "json";

  try {
    if (*compute) {
      const khd::LinkDiagram d = read_diagram(file);
      const khd::Domain domain = khd::Domain::parse(ring);
      const khd::HomologyOptions opts{workers};
      if (reduced && !compute->count("--basepoint")) throw khd::DiagramError("--reduced needs --basepoint");
      const khd::BigradedGroup g =
          reduced ? khd::reduced_khovanov(d, basepoint, domain, opts) : khd::khovanov_homology(d, domain, opts);
      std::cout << (json ? g.to_json() + "\n" : g.to_text());
      return 0;
    }
    if (*detect) {
      const khd::LinkDiagram d = read_diagram(file);
      const khd::DetectionReport r = khd::detect_t26(d, {workers, nullptr});
      std::cout << (json ? r.to_json() + "\n" : r.to_text());
      if (r.overall) return 0;
      return r.first_difference ? 2 : 1;
    }
    if (*census) {
      const auto entries = khd::run_census_file(file, {workers, nullptr});
      std::cout << (json ? khd::census_to_json(entries) + "\n" : khd::census_to_csv(entries));
      return 0;
    }
    if (*lee) {
      const khd::GradedRanks r = khd::lee_homology(read_diagram(file));
      if (json) {
        std::cout << lee_json(r) << "\n";
      } else {
        for (const auto& [i, rank] : r.ranks) std::cout << "i=" << i << ": " << rank << "\n";
        std::cout << "total " << r.total() << "\n";
      }
      return 0;
    }
    if (*jones) {
      const khd::LaurentPolynomial p = khd::kauffman_jones(read_diagram(file));
      std::cout << (json ? p.to_json() : p.to_string()) << "\n";
      return 0;
    }
    if (*hfl) {
      khd::hfl::SearchOptions opts;
      opts.contract = lax ? khd::hfl::Contract::Lax : khd::hfl::Contract::Strict;
      opts.window_extension = 2 * extend;
      std::vector<khd::hfl::CaseReport> reports;
      if (!case_name.empty()) {
        khd::hfl::CaseSpec c = khd::hfl::CaseSpec::parse(case_name);
        c.samples = samples;
        reports.push_back(khd::hfl::run_case(c, opts));
      } else {
        reports = khd::hfl::run_all(samples, opts);
      }
      if (json) {
        std::cout << (reports.size() == 1 ? reports.front().to_json() : khd::hfl::reports_to_json(reports)) << "\n";
      } else {
        for (const auto& r : reports) std::cout << r.to_text();
      }
      khd::hfl::require_no_counterexample(reports);
      return 0;
    }
  } catch (const khd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
