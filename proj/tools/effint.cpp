// Batch front end: runs gallery suites and converts scheme files.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "effint/errors.hpp"
#include "effint/gallery.hpp"
#include "effint/scheme_io.hpp"
#include "effint/suite.hpp"

namespace {

constexpr int kUsage = 3;

int emit(const effint::SuiteRun& run, const std::string& report_path) {
  std::cout << run.report();
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report: " << report_path << "\n";
      return kUsage;
    }
    out << run.report();
  }
  if (auto p = run.first_problem()) std::cerr << "first problem: " << p->line() << "\n";
  return run.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effint: computable functors and effective interpretations"};
  app.set_version_flag("--version", "effint 0.1.0");

  bool list = false;
  std::string item;
  std::string budget = "default";
  std::string report;
  std::string load;
  std::string save;

  app.add_flag("--list", list, "List gallery items with their suites");
  app.add_option("--item", item, "Gallery item to check");
  app.add_option("--budget", budget, "Budget profile")
      ->check(CLI::IsMember({"quick", "default", "deep"}));
  app.add_option("--report", report, "Also write the report to this file");
  app.add_option("--load-scheme", load, "Check a scheme file instead of a gallery item")
      ->excludes("--item");
  app.add_option("--save-scheme", save, "Write the scheme of --item to this file")
      ->needs("--item");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (list) {
      for (const auto& name : effint::gallery_list()) {
        const auto it = effint::gallery_item(name);
        std::cout << name;
        for (const auto& s : it.expected) std::cout << " " << s;
        std::cout << "\n";
      }
      return 0;
    }

    const auto profile = effint::budget_profile(budget);

    if (!load.empty()) {
      const auto scheme = effint::load_scheme(load);
      return emit(effint::run_suite(effint::item_from_scheme(scheme), *profile), report);
    }

    if (item.empty()) {
      std::cerr << "nothing to do: pass --list, --item or --load-scheme\n" << app.help();
      return kUsage;
    }

    const auto names = effint::gallery_list();
    if (std::find(names.begin(), names.end(), item) == names.end()) {
      std::cerr << "unknown item: " << item << "\n";
      return kUsage;
    }

    if (!save.empty()) {
      const auto it = effint::gallery_item(item);
      if (!it.scheme) {
        std::cerr << "item " << item << " has no scheme\n";
        return kUsage;
      }
      effint::save_scheme(*it.scheme, save);
      return 0;
    }

    return emit(effint::run_suite(item, *profile), report);
  } catch (const effint::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const effint::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const effint::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
