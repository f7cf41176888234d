// Command-line front end for the symtensor library.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "symtensor/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kError = 1, kContract = 3 };

}  // namespace

int main(int argc, char** argv) {
  using namespace symtensor;
  CLI::App app{"Best rank-1 approximation, norms and decomposable symmetric rank for dense tensors"};
  app.require_subcommand(1);

  cli::Options opt;
  std::string out_path, csv_path, norm;
  bool timing = false;
  app.add_option("--seed", opt.seed, "Base seed for every randomized routine");
  app.add_option("--tol", opt.tol, "Tolerance for certificates and contracts")->check(CLI::PositiveNumber);
  app.add_option("--restarts", opt.restarts, "Number of restarts")->check(CLI::PositiveNumber);
  app.add_flag("--trace", opt.trace, "Include iteration details in the report");
  app.add_option("--out", out_path, "Also write the report to this file");
  app.add_flag("--timing", timing, "Add runtime_ms to the report (breaks byte-identical reruns)");

  std::string input;
  auto* rank1 = app.add_subcommand("rank1", "Best rank-1 certificate of a tensor file");
  rank1->add_option("input", input, "Tensor JSON file")->required()->check(CLI::ExistingFile);

  auto* recover = app.add_subcommand("recover", "Recover the extremal form from a best rank-1 point");
  recover->add_option("input", input, "JSON file with \"tensor\" and optional \"point\"")->required()->check(CLI::ExistingFile);

  auto* norms = app.add_subcommand("norms", "Norm estimates with witnesses");
  norms->add_option("input", input, "Tensor JSON file")->required()->check(CLI::ExistingFile);
  norms->add_option("--norm", norm, "hs, eps or pi (default: all)")->check(CLI::IsMember({"hs", "eps", "pi"}));

  auto* factor = app.add_subcommand("factor", "Factor a binary form into linear forms");
  factor->add_option("input", input, "Binary form text file")->required()->check(CLI::ExistingFile);

  std::string demo_name;
  std::size_t count = 0;
  auto* demo = app.add_subcommand("demo", "Packaged constructions with CSV series");
  demo->add_option("name", demo_name, "border-rank, nonuniqueness or improvement")
      ->required()
      ->check(CLI::IsMember({"border-rank", "nonuniqueness", "improvement"}));
  demo->add_option("--count", count, "Series length (n_max, samples or pairs)");
  demo->add_option("--norm", norm, "Norm for the improvement demo")->check(CLI::IsMember({"hs", "eps", "pi"}));
  demo->add_option("--csv", csv_path, "Write the CSV series to this file (default: stdout after the report)");

  CLI11_PARSE(app, argc, argv);
  if (!norm.empty()) opt.norm = norm;

  try {
    const auto t0 = std::chrono::steady_clock::now();
    cli::json report;
    std::string csv;
    if (*rank1) report = cli::cmd_rank1(input, opt);
    if (*recover) report = cli::cmd_recover(input, opt);
    if (*norms) report = cli::cmd_norms(input, opt);
    if (*factor) report = cli::cmd_factor(input, opt);
    if (*demo) {
      auto d = cli::cmd_demo(demo_name, opt, count);
      report = std::move(d.report);
      csv = std::move(d.csv);
    }
    if (timing) {
      report["runtime_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    }
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) io::write_text(out_path, text);
    if (!csv.empty()) {
      if (csv_path.empty()) {
        std::cout << csv;
      } else {
        io::write_text(csv_path, csv);
      }
    }
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation [" << e.invariant() << "]: " << e.what() << "\n";
    return kContract;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kOk;
}
