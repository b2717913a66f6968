// Command-line front end for the restricted-reference complexity lab.

#include "krlab/lab.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

int code(krlab::ExitCode c) { return static_cast<int>(c); }

template <class F>
int guarded(F&& f) {
  using krlab::ExitCode;
  try {
    return f();
  } catch (const krlab::MalformedBits& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return code(ExitCode::Usage);
  } catch (const krlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return code(ExitCode::Usage);
  } catch (const krlab::ArtifactError& e) {
    std::cerr << "artifact error: " << e.what() << '\n';
    return code(ExitCode::Usage);
  } catch (const krlab::InfiniteComplexity& e) {
    std::cerr << "budget too small: " << e.what() << " (s=" << e.s().to_string() << ", d=" << e.d().to_string()
              << ")\n";
    return code(ExitCode::Budget);
  } catch (const krlab::BudgetTooSmall& e) {
    std::cerr << "budget too small: " << e.what() << '\n';
    return code(ExitCode::Budget);
  } catch (const krlab::KraftViolation& e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return code(ExitCode::VerificationFailed);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conditional Kolmogorov complexity on a small prefix machine, and the restricted computer W"};
  app.require_subcommand(1);

  krlab::LabConfig config;
  std::string out_dir = config.out_dir.string();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--delta", config.delta, "simple-set bound delta")->capture_default_str();
    sub->add_option("--max-len", config.max_len, "longest program, in bits")->capture_default_str();
    sub->add_option("--steps", config.steps, "step budget per run")->capture_default_str();
    sub->add_option("--out", out_dir, "artifact directory")->capture_default_str();
    sub->add_flag("--allow-partial", config.allow_partial, "accept --max-len below the finiteness bound");
  };

  auto* build = app.add_subcommand("build", "enumerate programs, write index.tsv and ktable.tsv");
  auto* kappa = app.add_subcommand("kappa", "compute the minimal uniform constant, write kappa.tsv");
  auto* construct = app.add_subcommand("construct", "build the restricted computers, write wtable.tsv");
  auto* verify = app.add_subcommand("verify", "check the exact chain rule for W, write theorem.tsv");
  auto* delta = app.add_subcommand("delta-report", "survey the chain-rule defect of U, write delta_survey.tsv");
  auto* query = app.add_subcommand("query", "print one complexity: 'kU x d' or 'kW alpha gamma d'");
  for (auto* sub : {build, kappa, construct, verify, delta, query}) add_common(sub);

  std::string kind;
  std::vector<std::string> strings;
  query->add_option("kind", kind, "kU or kW")->required()->check(CLI::IsMember({"kU", "kW"}));
  query->add_option("strings", strings, "bit strings, '^' for the empty string")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(krlab::ExitCode::Usage);
  }
  config.out_dir = out_dir;

  using krlab::ExitCode;
  return guarded([&]() -> int {
    if (*build) {
      krlab::cmd_build(config, std::cout);
    } else if (*kappa) {
      krlab::cmd_kappa(config, std::cout);
    } else if (*construct) {
      krlab::cmd_construct(config, std::cout);
    } else if (*verify) {
      return code(krlab::cmd_verify(config, std::cout).ok() ? ExitCode::Ok : ExitCode::VerificationFailed);
    } else if (*delta) {
      krlab::cmd_delta_report(config, std::cout);
    } else if (*query) {
      std::vector<krlab::BitString> args;
      for (const auto& s : strings) args.push_back(krlab::BitString::parse(s));
      const std::size_t want = kind == "kU" ? 2 : 3;
      if (args.size() != want) {
        std::cerr << "usage error: query " << kind << " takes " << want << " strings\n";
        return code(ExitCode::Usage);
      }
      std::cout << (kind == "kU" ? krlab::query_kU(config, args[0], args[1])
                                 : krlab::query_kW(config, args[0], args[1], args[2]))
                << '\n';
    }
    return code(ExitCode::Ok);
  });
}
