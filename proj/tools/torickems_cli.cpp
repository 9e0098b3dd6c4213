// Command-line front end. Exit codes: 0 ok, 1 selftest failure,
// 2 invalid input, 3 no convergence or an inconclusive-only flow analysis.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "torickems/torickems.hpp"

namespace tk = torickems;

namespace {

enum Exit { kOk = 0, kSelftestFailed = 1, kInvalid = 2, kNoConvergence = 3 };

struct Source {
  std::string fixture;
  std::string input;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--fixture", fixture, "built-in fixture name");
    auto* i = cmd->add_option("--input", input, "fixture JSON file")->check(CLI::ExistingFile);
    f->excludes(i);
  }

  tk::Fixture load() const {
    if (!input.empty()) return tk::load_fixture_file(input);
    if (fixture.empty()) throw tk::Error(tk::ErrorKind::InvalidInput, "one of --fixture or --input is required");
    return tk::find_fixture(fixture);
  }
};

struct Output {
  std::string format = "json";
  std::string path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--output,-o", path, "write the report here instead of stdout");
  }

  bool json() const { return format == "json"; }

  void emit(const std::string& body) const {
    if (path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(path);
    if (!out) throw tk::Error(tk::ErrorKind::InvalidInput, "cannot write '" + path + "'");
    out << body;
  }

  void emit(const tk::Json& j) const { emit(j.dump(2) + "\n"); }
};

int exit_code(tk::ErrorKind k) {
  switch (k) {
    case tk::ErrorKind::NoConvergence:
    case tk::ErrorKind::HessianSingular:
      return kNoConvergence;
    default:
      return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric Fano polytopes, soliton vectors and minimal destabilizing subvarieties"};
  app.require_subcommand(1);

  Source src;
  Output out;
  std::string mode = "ke";
  double tol = 1e-12;
  bool enumerate = false;
  std::vector<double> alphas;
  std::optional<double> t_max;
  double eps = 0.25, s0 = 8.0;
  std::string csv_path, filter, export_dir;
  std::string stage = "command line";

  auto* analyze = app.add_subcommand("analyze", "exclusion analysis of MIS candidates (KE or KRS)");
  src.attach(analyze);
  out.attach(analyze);
  analyze->add_option("--mode", mode, "ke or krs")->check(CLI::IsMember({"ke", "krs"}));
  analyze->add_option("--tol", tol, "soliton solver gradient tolerance");
  analyze->add_flag("--enumerate", enumerate, "ignore the fixture's admissible list and enumerate face-orbit unions");

  auto* flow = app.add_subcommand("flow", "numerical MIS along the Kaehler-Ricci flow (surfaces)");
  src.attach(flow);
  out.attach(flow);
  flow->add_option("--alpha", alphas, "exponents in (1/2, 1), comma separated")->delimiter(',');
  flow->add_option("--t-max", t_max, "largest flow time (default 40/beta)");
  flow->add_option("--eps", eps, "transverse half-width of each facet region");
  flow->add_option("--s0", s0, "start of each facet region along its ray");
  flow->add_option("--csv", csv_path, "write the (facet, alpha, t, log integral) table here");

  auto* soliton = app.add_subcommand("soliton", "polytope summary and soliton vector");
  src.attach(soliton);
  out.attach(soliton);
  soliton->add_option("--tol", tol, "gradient tolerance");

  auto* roots = app.add_subcommand("roots", "Demazure roots");
  src.attach(roots);
  out.attach(roots);

  auto* fixtures = app.add_subcommand("fixtures", "built-in fixture catalog");
  fixtures->require_subcommand(1);
  auto* fx_list = fixtures->add_subcommand("list", "list fixture names and notes");
  auto* fx_export = fixtures->add_subcommand("export", "write each fixture as <name>.json");
  fx_export->add_option("--dir", export_dir, "target directory")->required();

  auto* selftest = app.add_subcommand("selftest", "run the property suite");
  selftest->add_option("--filter", filter, "group or property name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*analyze) {
      stage = "load fixture";
      const auto fixture = src.load();
      stage = "polytope summary and soliton solve";
      const auto summary = tk::summarize(fixture, true, tol);
      stage = "MIS analysis";
      tk::CandidateOptions copt;
      copt.enumerate = enumerate;
      const auto rep = tk::analyze(fixture, mode == "ke" ? tk::AnalysisMode::KE : tk::AnalysisMode::KRS, copt);
      if (out.json()) {
        tk::FaceContext ctx(summary.fp);
        auto body = tk::mis_report_json(rep, ctx);
        tk::Json j;
        j["fixture"] = body["fixture"];
        j["mode"] = body["mode"];
        j["summary"] = tk::summary_json(summary);
        j["candidates"] = body["candidates"];
        j["conclusion"] = body["conclusion"];
        out.emit(j);
      } else {
        out.emit(tk::summary_text(summary) + tk::mis_report_text(rep));
      }
      return kOk;
    }
    if (*flow) {
      stage = "load fixture";
      const auto fixture = src.load();
      tk::FlowOptions fopt;
      if (!alphas.empty()) fopt.alphas = alphas;
      fopt.t_max = t_max;
      fopt.eps = eps;
      fopt.s0 = s0;
      stage = "flow MIS analysis";
      const auto rep = tk::flow_mis_report(fixture, fopt);
      if (out.json()) {
        out.emit(tk::flow_report_json(rep, fopt));
      } else {
        out.emit(tk::flow_report_text(rep));
      }
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw tk::Error(tk::ErrorKind::InvalidInput, "cannot write '" + csv_path + "'");
        csv << tk::flow_csv(rep);
      }
      return rep.any_inconclusive && rep.divergent.empty() ? kNoConvergence : kOk;
    }
    if (*soliton) {
      stage = "load fixture";
      const auto fixture = src.load();
      stage = "soliton solve";
      const auto summary = tk::summarize(fixture, true, tol);
      if (out.json()) {
        tk::Json j;
        j["fixture"] = fixture.name;
        j["summary"] = tk::summary_json(summary);
        out.emit(j);
      } else {
        out.emit(tk::summary_text(summary));
      }
      return kOk;
    }
    if (*roots) {
      stage = "load fixture";
      const auto fixture = src.load();
      stage = "root enumeration";
      const auto fp = tk::build_polytope(fixture.rays);
      const auto rs = tk::demazure_roots(fp);
      if (out.json()) {
        tk::Json j;
        j["fixture"] = fixture.name;
        j["count"] = rs.size();
        j["roots"] = tk::roots_json(fp, rs);
        out.emit(j);
      } else {
        std::ostringstream o;
        o << rs.size() << " Demazure roots of " << fixture.name << '\n';
        for (const auto& r : rs)
          o << "  m = " << r.m.to_string() << ", <m, " << fp.fan.rays[r.distinguished_ray].to_string() << "> = -1\n";
        out.emit(o.str());
      }
      return kOk;
    }
    if (*fx_list) {
      for (const auto& f : tk::fixture_catalog()) std::cout << f.name << "  " << f.notes << '\n';
      return kOk;
    }
    if (*fx_export) {
      stage = "fixture export";
      std::filesystem::create_directories(export_dir);
      for (const auto& f : tk::fixture_catalog()) {
        const auto path = std::filesystem::path(export_dir) / (f.name + ".json");
        std::ofstream o(path);
        if (!o) throw tk::Error(tk::ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
        o << tk::fixture_to_json(f).dump(2) << '\n';
        std::cout << path.string() << '\n';
      }
      return kOk;
    }
    if (*selftest) {
      std::size_t failed = 0, run = 0;
      for (const auto& r : tk::run_selftest(filter)) {
        ++run;
        std::printf("[%s] %s.%s (%.2fs)%s%s\n", r.passed ? "ok" : "FAIL", r.group.c_str(), r.name.c_str(), r.seconds,
                    r.passed ? "" : ": ", r.detail.c_str());
        if (!r.passed) ++failed;
      }
      if (run == 0) {
        std::cerr << "no property matches filter '" << filter << "'\n";
        return kInvalid;
      }
      std::printf("%zu of %zu properties passed\n", run - failed, run);
      return failed ? kSelftestFailed : kOk;
    }
  } catch (const tk::Error& e) {
    std::cerr << "error during " << stage << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error during " << stage << ": " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
