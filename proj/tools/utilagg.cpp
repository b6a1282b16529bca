// Command-line driver: axiom battery, weight recovery, coincidence
// pipeline and fixture emission over society JSON files.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 bad input or
// usage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "utilagg/utilagg.hpp"

namespace {

struct Globals {
  bool json = false;
  std::size_t max_states = 64;
  unsigned threads = 1;
};

int emit_report(const utilagg::Json& r, const Globals& g) {
  if (g.json)
    std::cout << r.dump(2) << "\n";
  else
    std::cout << utilagg::render_text(r);
  return r.at("status") == "PASS" ? 0 : 1;
}

utilagg::SocietyFile load(const std::string& path, const Globals& g) {
  auto f = utilagg::load_society(path);
  if (f.society.space().size() > g.max_states)
    throw utilagg::CapacityError(path + ": " + std::to_string(f.society.space().size()) +
                                 " states exceed --max-states " + std::to_string(g.max_states));
  return f;
}

int write_fixture(const utilagg::SocietyFile& f, const std::string& out, const Globals& g) {
  if (f.society.space().size() > g.max_states)
    throw utilagg::CapacityError("fixture has " + std::to_string(f.society.space().size()) +
                                 " states, above --max-states " + std::to_string(g.max_states));
  const std::string text = utilagg::emit_society(f);
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw utilagg::ParseError(out + ": cannot write file");
  os << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks of utilitarian aggregation theorems on finite societies"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  app.add_option("--max-states", g.max_states, "Largest state space accepted")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads for independent checks")->check(CLI::Range(1u, 256u));

  std::string file;
  auto* validate = app.add_subcommand("validate", "Run the axiom battery on a society file");
  validate->add_option("file", file, "Society JSON file")->required();

  std::string mode;
  auto* recover = app.add_subcommand("recover", "Recover aggregation weights");
  recover->add_option("file", file, "Society JSON file")->required();
  recover->add_option("--mode", mode, "harsanyi (NM profile) or harvey (Alt profile)")
      ->required()
      ->check(CLI::IsMember({"harsanyi", "harvey"}));

  auto* coincide = app.add_subcommand("coincide", "Run the NM/Alt coincidence pipeline");
  coincide->add_option("file", file, "Society JSON file")->required();

  std::string out;
  auto* fixture = app.add_subcommand("fixture", "Emit a built-in fixture as society JSON");
  fixture->require_subcommand(1);
  std::size_t kmax = 10;
  std::string eps = "1/2";
  bool degenerate = false;
  auto* sqrt_cmd = fixture->add_subcommand("sqrt", "Square-root fixture");
  sqrt_cmd->add_option("--k", kmax, "Largest index k")->required();
  sqrt_cmd->add_option("--eps", eps, "Grid step as p/q")->required();
  sqrt_cmd->add_flag("--degenerate", degenerate, "Make agent 2 indifferent between all states");
  sqrt_cmd->add_option("-o,--output", out, "Output path (default stdout)");
  std::string resolution = "1/4";
  auto* simplex_cmd = fixture->add_subcommand("simplex", "Simplex counterexample");
  simplex_cmd->add_option("--resolution", resolution, "Step of sqrt(x1) as 2^-m")->required();
  simplex_cmd->add_option("-o,--output", out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) {
      utilagg::ValidateOptions opt;
      opt.threads = g.threads;
      return emit_report(utilagg::validate_report(load(file, g), opt), g);
    }
    if (*recover) {
      auto f = load(file, g);
      return emit_report(mode == "harsanyi" ? utilagg::harsanyi_report(f) : utilagg::harvey_report(f), g);
    }
    if (*coincide) {
      auto f = load(file, g);
      if (!f.society.nm() || !f.society.alt())
        throw utilagg::ParseError(file + ": coincide needs both nm_profile and alt_profile");
      return emit_report(utilagg::coincide_report(f), g);
    }
    if (*sqrt_cmd) {
      auto e = utilagg::Rational::parse(eps);
      auto fx = utilagg::sqrt_fixture(kmax, e, degenerate);
      std::string title = "square-root fixture, kmax " + std::to_string(kmax) + ", eps " + e.str();
      if (degenerate) title += ", agent 2 indifferent";
      return write_fixture({title, std::nullopt, std::move(fx.society)}, out, g);
    }
    if (*simplex_cmd) {
      auto r = utilagg::Rational::parse(resolution);
      return write_fixture({"simplex counterexample, resolution " + r.str(), std::nullopt,
                            utilagg::simplex_counterexample(r)},
                           out, g);
    }
  } catch (const utilagg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
