#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocfa/algebra.hpp"
#include "ocfa/dsl.hpp"
#include "ocfa/invariants.hpp"
#include "ocfa/normal_form.hpp"
#include "ocfa/rewrite.hpp"

using namespace ocfa;
namespace fs = std::filesystem;

namespace {

// exit codes
constexpr int kOk = 0, kDomain = 1, kUsage = 2;

struct Failure {
  int code;
  std::string msg;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, path + ": cannot open file"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DiagramTerm load(const std::string& path) {
  std::string text = slurp(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    std::ostringstream os;
    os << path << ":" << e.span.line << ":" << e.span.column << ": "
       << (e.kind == ParseErrorKind::Type ? "type error: " : "error: ") << e.what();
    throw Failure{e.kind == ParseErrorKind::Type ? kDomain : kUsage, os.str()};
  }
}

KFA load_algebra(const std::string& arg) {
  if (!fs::exists(arg)) {
    try {
      return builtin_by_id(arg);
    } catch (const std::invalid_argument&) {
      throw Failure{kUsage, arg + ": no such file or builtin algebra"};
    }
  }
  try {
    return read_kfa(slurp(arg));
  } catch (const MalformedAlgebra& e) {
    throw Failure{kUsage, arg + ": " + e.what()};
  }
}

std::string rat(const Rational& q) { return q.get_str(); }

nlohmann::json matrix_json(const LinearMap& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t r = 0; r < m.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t c = 0; c < m.cols; ++c) row.push_back(rat(m.at(r, c)));
    rows.push_back(row);
  }
  return {{"rows", m.rows}, {"cols", m.cols}, {"entries", rows}};
}

// one report per input file, in input order, optionally on several threads
struct Batch {
  std::string out, err;
  int code = kOk;
};

int run_batch(const std::vector<std::string>& files, int jobs, const std::function<std::string(const std::string&)>& f) {
  std::vector<Batch> res(files.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i; (i = next++) < files.size();) {
      try {
        res[i].out = f(files[i]);
      } catch (const Failure& e) {
        res[i].code = e.code, res[i].err = e.msg;
      } catch (const std::exception& e) {
        res[i].code = kDomain, res[i].err = files[i] + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::max(1, jobs) && k < (int)files.size(); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int code = kOk;
  for (auto& r : res) {
    std::cout << r.out;
    if (!r.err.empty()) std::cerr << r.err << "\n";
    code = std::max(code, r.code);
  }
  return code;
}

std::string check_report(const std::string& path, bool json) {
  DiagramTerm t = load(path);
  TypingReport rep = validate(t);
  if (!rep.ok) throw Failure{kDomain, path + ": slice " + std::to_string(rep.slice) + ", position " + std::to_string(rep.position) + ": " + rep.message};
  if (json) {
    nlohmann::json j{{"file", path},
                     {"ok", true},
                     {"source", t.source.str()},
                     {"target", t.target.str()},
                     {"slices", t.slices.size()},
                     {"generators", t.generator_count()}};
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << path << ": ok " << t.source.kinds_str() << " -> " << t.target.kinds_str() << ", " << t.slices.size() << " slices, "
     << t.generator_count() << " generators\n";
  os << "  source " << t.source.str() << "\n  target " << t.target.str() << "\n";
  return os.str();
}

std::string invariants_report(const std::string& path, bool json) {
  DiagramTerm t = load(path);
  InvariantProfile p = invariant_profile(t);
  if (json) return profile_json(p) + "\n";
  return path + "\n" + profile_text(p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ocfa: open-closed cobordism diagrams: invariants, normal forms, evaluation"};
  app.require_subcommand(1, 1);
  int jobs = 1;
  app.add_option("--jobs,-j", jobs, "process input files concurrently")->check(CLI::PositiveNumber);

  std::vector<std::string> files;
  bool json = false;

  auto* check = app.add_subcommand("check", "parse and type-check diagrams");
  check->add_option("files", files, ".ocd files")->required();
  check->add_flag("--json", json, "JSON report");

  auto* inv = app.add_subcommand("invariants", "per-component genus, windows and boundary permutation");
  inv->add_option("files", files, ".ocd files")->required();
  inv->add_flag("--json", json, "JSON report");

  std::string nf_in, nf_out, trace_out;
  bool windows = false;
  auto* norm = app.add_subcommand("normalize", "rewrite to the normal form");
  norm->add_option("file", nf_in, ".ocd file")->required();
  norm->add_option("-o,--output", nf_out, "write the normal form here instead of stdout");
  norm->add_option("--trace", trace_out, "write the move trace here");
  norm->add_flag("--window-macro", windows, "print closed windows as window_w");

  std::string f1, f2;
  auto* eq = app.add_subcommand("equiv", "exit 0 iff the diagrams are equivalent");
  eq->add_option("first", f1)->required();
  eq->add_option("second", f2)->required();

  std::string ev_in, alg_arg;
  auto* ev = app.add_subcommand("eval", "evaluate a diagram as a linear map");
  ev->add_option("file", ev_in, ".ocd file")->required();
  ev->add_option("--algebra,-a", alg_arg, ".kfa file or builtin id")->required();
  ev->add_flag("--json", json, "JSON report");

  std::string ax_arg;
  auto* ax = app.add_subcommand("axioms", "verify the axioms of an algebra");
  ax->add_option("algebra", ax_arg, ".kfa file or builtin id")->required();
  ax->add_flag("--json", json, "JSON report");

  std::string corpus_dir = "corpus";
  auto* ex = app.add_subcommand("examples", "list builtin algebras and corpus diagrams");
  ex->add_option("--corpus", corpus_dir, "corpus directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return run_batch(files, jobs, [&](const std::string& f) { return check_report(f, json); });
    if (*inv) return run_batch(files, jobs, [&](const std::string& f) { return invariants_report(f, json); });

    if (*norm) {
      DiagramTerm t = load(nf_in);
      auto [nf, tr] = normalize_with_trace(t);
      PrintOptions po;
      po.window_macro = windows;
      std::string text = print(nf, po);
      if (nf_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(nf_out) << text;
      }
      if (!trace_out.empty()) std::ofstream(trace_out) << write_trace(tr);
      return kOk;
    }

    if (*eq) {
      DiagramTerm a = load(f1), b = load(f2);
      bool same = equivalent(a, b);
      std::cout << (same ? "equivalent" : "not equivalent") << "\n";
      return same ? kOk : kDomain;
    }

    if (*ev) {
      DiagramTerm t = load(ev_in);
      KFA alg = load_algebra(alg_arg);
      LinearMap m = evaluate(t, alg);
      if (json)
        std::cout << matrix_json(m).dump(2) << "\n";
      else
        std::cout << m.rows << "x" << m.cols << "\n" << m.str();
      return kOk;
    }

    if (*ax) {
      KFA alg = load_algebra(ax_arg);
      AxiomReport rep = check_axioms(alg);
      std::cout << (json ? rep.json() + "\n" : rep.text());
      return rep.all_pass() ? kOk : kDomain;
    }

    if (*ex) {
      std::cout << "builtin algebras:\n";
      for (auto& b : builtin_algebras()) std::cout << "  " << b.id << "  " << b.description << "\n";
      std::cout << "corpus (" << corpus_dir << "):\n";
      std::vector<std::string> names;
      if (fs::is_directory(corpus_dir))
        for (auto& e : fs::recursive_directory_iterator(corpus_dir))
          if (e.is_regular_file() && e.path().extension() == ".ocd") names.push_back(fs::relative(e.path(), corpus_dir).string());
      std::sort(names.begin(), names.end());
      for (auto& n : names) std::cout << "  " << n << "\n";
      return kOk;
    }
  } catch (const Failure& e) {
    std::cerr << e.msg << "\n";
    return e.code;
  } catch (const UnknownColor& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const StrategyStuck& e) {
    std::cerr << "internal error: " << e.what() << "\nreproducer:\n" << e.reproducer;
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
