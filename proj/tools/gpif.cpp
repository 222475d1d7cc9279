// gpif: run DSL scripts and property checks from the command line.
//   exit 0 = all pass, 1 = violation, 2 = configuration / input error

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gpif/dsl.hpp"
#include "gpif/props.hpp"

namespace {

using namespace gpif;

struct ReportFlags {
  std::string format = "text";
  bool timing = false;
};

void add_report_flags(CLI::App* cmd, ReportFlags& f) {
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--timing", f.timing, "Include wall-clock times");
}

int print_reports(const std::vector<props::PropertyReport>& reports, const ReportFlags& f) {
  int code = 0;
  for (const auto& r : reports) {
    std::cout << (f.format == "json" ? props::report_json(r, f.timing) : props::report_text(r, f.timing)) << "\n";
    if (!r.pass) code = 1;
  }
  return code;
}

// "Z/12", "GF(5)", "product Z/4, GF(3)"
finring::RingSpec parse_ring_spec(const std::string& text) {
  const auto script = dsl::parse_script("ring " + text);
  const auto& ring = script.statements.at(0).ring;
  if (ring.kind != dsl::RingDecl::Kind::Finite) throw ConfigError("property checks need a finite ring: " + text);
  return ring.finite;
}

struct FamilyFlags {
  bool exhaustive = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> rings;
  std::size_t cap = 64;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
  auto* ex = cmd->add_flag("--exhaustive", f.exhaustive, "Enumerate every instance (default)");
  auto* sa = cmd->add_option("--samples", f.samples, "Sample this many instances instead")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for sampled mode (mt19937_64)")->needs(sa);
  ex->excludes(sa);
  cmd->add_option("--ring", f.rings, "Restrict to these rings (repeatable), e.g. 'Z/12'");
  cmd->add_option("--cap", f.cap, "Largest module size")->check(CLI::Range(1, 4096));
}

props::InstanceFamily make_family(const FamilyFlags& f) {
  props::InstanceFamily fam = props::InstanceFamily::default_family();
  if (!f.rings.empty()) {
    std::vector<finring::RingSpec> specs;
    for (const auto& r : f.rings) specs.push_back(parse_ring_spec(r));
    fam = props::InstanceFamily::of_rings(std::move(specs));
  }
  fam.cap = f.cap;
  if (f.samples > 0) {
    fam.exhaustive = false;
    fam.samples = f.samples;
    fam.seed = f.seed;
  }
  return fam;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized prime ideal factorization toolkit"};
  app.require_subcommand(1);

  std::string file;
  ReportFlags run_out;
  bool expect_pass = false;
  auto* run = app.add_subcommand("run", "Run a .gpif script");
  run->add_option("file", file, "Script file")->required();
  run->add_flag("--expect-pass", expect_pass, "Boolean queries without 'expect' must be true");
  add_report_flags(run, run_out);

  std::string property;
  FamilyFlags check_fam;
  ReportFlags check_out;
  auto* check = app.add_subcommand("check", "Check one property over an instance family");
  check->add_option("property", property, "Property id, e.g. DSUM-MAX")->required();
  add_family_flags(check, check_fam);
  add_report_flags(check, check_out);

  FamilyFlags suite_fam;
  ReportFlags suite_out;
  auto* suite = app.add_subcommand("suite", "Check every property over the default family");
  add_family_flags(suite, suite_fam);
  add_report_flags(suite, suite_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      std::ifstream in(file);
      if (!in) {
        std::cerr << "gpif: cannot read " << file << "\n";
        return 2;
      }
      std::stringstream text;
      text << in.rdbuf();
      const auto script = dsl::parse_script(text.str());
      dsl::RunOptions opts;
      opts.format = run_out.format == "json" ? dsl::RunOptions::Format::Json : dsl::RunOptions::Format::Text;
      opts.expect_pass = expect_pass;
      opts.timing = run_out.timing;
      const auto res = dsl::run_script(script, opts);
      std::cout << res.output;
      return res.exit_code;
    }
    if (*check) {
      const auto id = props::parse_property(property);
      if (!id) throw ConfigError("unknown property '" + property + "'");
      return print_reports({props::check_property(*id, make_family(check_fam))}, check_out);
    }
    return print_reports(props::run_suite(make_family(suite_fam)), suite_out);
  } catch (const ParseError& e) {
    std::cerr << "gpif: " << (*run ? file + ": " : std::string()) << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "gpif: " << e.what() << "\n";
    return 2;
  }
}
