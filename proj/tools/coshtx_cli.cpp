// Command-line front end over the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coshtx/coshtx.h"

namespace {

enum Exit { kOk = 0, kAcceptance = 1, kInput = 2, kNumerical = 3 };

struct Options {
  std::string psi;
  std::vector<std::string> params;
  std::string op;
  std::string out;
  std::string format = "json";
  std::string moments;
  std::string example;
  unsigned long long seed = 0;
  int m_max = 10;
  int k = 0;
  double x_max = 50.0;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_for(coshtx_status s) {
  switch (s) {
    case COSHTX_OK: return kOk;
    case COSHTX_ERR_INVALID_INPUT:
    case COSHTX_ERR_UNKNOWN_CATALOG:
    case COSHTX_ERR_BAD_PARAMS: return kInput;
    default: return kNumerical;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Owns a C handle and its matching free function.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { if (p) Free(p); }
};

using Psi = Handle<coshtx_psi, coshtx_psi_free>;
using Affine = Handle<coshtx_affine, coshtx_affine_free>;
using Bundle = Handle<coshtx_bundle, coshtx_bundle_free>;

coshtx_status load_psi(const Options& o, Psi& psi) {
  const std::string prefix = "catalog:";
  if (o.psi.rfind(prefix, 0) == 0) {
    std::vector<std::string> keys;
    std::vector<double> values;
    for (const auto& kv : o.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw InputError("--param expects K=V, got " + kv);
      keys.push_back(kv.substr(0, eq));
      try {
        size_t used = 0;
        values.push_back(std::stod(kv.substr(eq + 1), &used));
        if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      } catch (const std::exception&) {
        throw InputError("--param value is not a number: " + kv);
      }
    }
    std::vector<const char*> ckeys;
    for (const auto& k : keys) ckeys.push_back(k.c_str());
    return coshtx_psi_catalog(o.psi.substr(prefix.size()).c_str(), ckeys.data(), values.data(),
                              values.size(), &psi.p);
  }
  if (!o.params.empty()) throw InputError("--param only applies to catalog:NAME");
  return coshtx_psi_from_json(read_file(o.psi).c_str(), &psi.p);
}

std::vector<double> load_moments(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<double> out;
  if (first != std::string::npos && text[first] == '[') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw InputError("moments JSON must be a list of numbers");
    for (const auto& v : j) {
      if (!v.is_number()) throw InputError("moments JSON must be a list of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  // CSV: one value per line or comma-separated; the last numeric field of each row is used,
  // so both "gamma" and "n,gamma" layouts load. Non-numeric rows (headers) are skipped.
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string field = line.substr(line.find_last_of(',') == std::string::npos
                                        ? 0
                                        : line.find_last_of(',') + 1);
    const auto b = field.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    field = field.substr(b);
    try {
      size_t used = 0;
      const double v = std::stod(field, &used);
      if (field.find_first_not_of(" \t\r", used) != std::string::npos) continue;
      out.push_back(v);
    } catch (const std::exception&) {
      continue;
    }
  }
  if (out.empty()) throw InputError("no moments found in " + path);
  return out;
}

bool is_csv(const std::string& name) {
  return name.size() >= 4 && name.compare(name.size() - 4, 4, ".csv") == 0;
}

void emit(const Options& o, const coshtx_bundle* b) {
  const size_t n = coshtx_bundle_file_count(b);
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    auto write = [&](const std::string& name, const char* body) {
      std::ofstream f(std::filesystem::path(o.out) / name, std::ios::binary);
      if (!f) throw InputError("cannot write " + name + " in " + o.out);
      f << body;
    };
    if (o.format == "json") write("report.json", coshtx_bundle_report(b));
    for (size_t i = 0; i < n; ++i) {
      const std::string name = coshtx_bundle_file_name(b, i);
      if (o.format == "json" || is_csv(name)) write(name, coshtx_bundle_file_contents(b, i));
    }
    return;
  }
  if (o.format == "json") {
    std::cout << coshtx_bundle_report(b) << "\n";
    return;
  }
  for (size_t i = 0; i < n; ++i) {
    const std::string name = coshtx_bundle_file_name(b, i);
    if (!is_csv(name)) continue;
    std::cout << "# " << name << "\n" << coshtx_bundle_file_contents(b, i);
  }
}

int fail_status(coshtx_status s) {
  std::cerr << "coshtx: " << coshtx_status_string(s) << ": " << coshtx_last_error() << "\n";
  return exit_for(s);
}

int finish(const Options& o, Bundle& bundle, bool acceptance) {
  emit(o, bundle.p);
  if (acceptance && !coshtx_bundle_ok(bundle.p)) {
    std::cerr << "coshtx: acceptance failure\n";
    return kAcceptance;
  }
  return kOk;
}

int run_analyze(const Options& o) {
  Psi psi;
  if (auto s = load_psi(o, psi)) return fail_status(s);
  Bundle b;
  if (auto s = coshtx_analyze_psi(psi.p, o.m_max, o.x_max, &b.p)) return fail_status(s);
  return finish(o, b, false);
}

int run_classify(const Options& o) {
  Psi psi;
  if (auto s = load_psi(o, psi)) return fail_status(s);
  Affine T;
  if (auto s = coshtx_affine_from_json(read_file(o.op).c_str(), &T.p)) return fail_status(s);
  Bundle b;
  if (auto s = coshtx_classify(psi.p, T.p, o.m_max, o.seed, &b.p)) return fail_status(s);
  return finish(o, b, false);
}

int run_recover(const Options& o) {
  const auto m = load_moments(o.moments);
  Bundle b;
  if (auto s = coshtx_recover(m.data(), m.size(), o.k, &b.p)) return fail_status(s);
  return finish(o, b, false);
}

int run_reproduce(const Options& o) {
  Bundle b;
  if (auto s = coshtx_reproduce(o.example.c_str(), &b.p)) return fail_status(s);
  return finish(o, b, true);
}

int run_verify(const Options& o) {
  Bundle b;
  if (auto s = coshtx_verify(&b.p)) return fail_status(s);
  return finish(o, b, true);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Hyperbolic cosine transforms and affine composition operators"};
  app.set_version_flag("--version", coshtx_version());
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Directory for report.json and CSV files (default: stdout)");
    c->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_psi = [&](CLI::App* c) {
    c->add_option("--psi", o.psi, "psi JSON file or catalog:NAME")->required();
    c->add_option("--param", o.params, "Catalog parameter K=V (repeatable)");
  };

  auto* analyze = app.add_subcommand("analyze-psi", "Analyze a psi function");
  add_psi(analyze);
  analyze->add_option("--m-max", o.m_max, "Largest Gram/Hankel size")->check(CLI::Range(2, 24));
  analyze->add_option("--x-max", o.x_max, "Upper end of the log-derivative window")
      ->check(CLI::Range(20.0, 1000.0));
  analyze->add_option("--seed", o.seed, "Accepted for uniformity; analysis is deterministic");
  add_output(analyze);

  auto* classify = app.add_subcommand("classify", "Classify an affine composition operator");
  add_psi(classify);
  classify->add_option("--op", o.op, "Affine symbol JSON file")->required();
  classify->add_option("--seed", o.seed, "Seed for sample points and norm search");
  classify->add_option("--m-max", o.m_max, "Largest Hankel size")->check(CLI::Range(2, 24));
  add_output(classify);

  auto* recover = app.add_subcommand("recover", "Recover an atomic measure from moments");
  recover->add_option("moments", o.moments, "CSV or JSON list of moments")->required();
  recover->add_option("--k", o.k, "Number of atoms")->required()->check(CLI::Range(1, 32));
  add_output(recover);

  auto* reproduce = app.add_subcommand("reproduce", "Rerun one documented example");
  std::vector<std::string> ids;
  for (size_t i = 0; i < coshtx_example_count(); ++i) ids.emplace_back(coshtx_example_id(i));
  reproduce->add_option("example", o.example, "Example id")->required()->check(CLI::IsMember(ids));
  add_output(reproduce);

  auto* verify = app.add_subcommand("verify", "Run the full acceptance suite");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*analyze) return run_analyze(o);
    if (*classify) return run_classify(o);
    if (*recover) return run_recover(o);
    if (*reproduce) return run_reproduce(o);
    return run_verify(o);
  } catch (const InputError& e) {
    std::cerr << "coshtx: " << e.what() << "\n";
    return kInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "coshtx: " << e.what() << "\n";
    return kInput;
  }
}
