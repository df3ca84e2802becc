// weakiso: command-line front end for the weak-isometry library.
//
// Exit codes: 0 ok, 2 parse or parameter error, 3 not a bijection,
// 4 verification failed, 5 resource guard.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weakiso/weakiso.hpp"

namespace {

using weakiso::io::json;

struct Global {
  bool json = false;
  std::uint64_t seed = 0;
  bool slow = false;
  int threads = 1;
};

constexpr int kExitParse = 2;
constexpr int kExitBijection = 3;
constexpr int kExitVerify = 4;
constexpr int kExitGuard = 5;

int exit_code_for(weakiso::ErrorKind k) {
  switch (k) {
    case weakiso::ErrorKind::NotABijection: return kExitBijection;
    case weakiso::ErrorKind::ResourceGuard: return kExitGuard;
    default: return kExitParse;
  }
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string set_text(const std::vector<int>& ds) {
  std::string s = "{";
  for (std::size_t k = 0; k < ds.size(); ++k) s += (k ? "," : "") + std::to_string(ds[k]);
  return s + "}";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw weakiso::Error(weakiso::ErrorKind::Parse, "cannot write " + path);
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string params;
  std::string family;
  int n = 0;
  std::string out;
  std::string format;
};

int cmd_generate(const Global& g, const GenerateArgs& a) {
  weakiso::FamilyParams params = [&]() -> weakiso::FamilyParams {
    if (!a.params.empty()) return weakiso::io::read_params_file(a.params);
    if (a.family.empty() || a.n <= 0) {
      throw weakiso::Error(weakiso::ErrorKind::InvalidParams, "give --params FILE, or --family and --n for a random member");
    }
    const auto fam = weakiso::family_from_tag(a.family);
    if (!fam) throw weakiso::Error(weakiso::ErrorKind::InvalidParams, "unknown family '" + a.family + "'");
    std::mt19937_64 rng(g.seed);
    return weakiso::random_params(*fam, weakiso::Dimension(a.n), rng);
  }();
  const auto f = weakiso::build(params);
  const bool as_json = a.format.empty() ? g.json : a.format == "json";
  auto write = [&](std::ostream& os) {
    if (as_json) {
      os << weakiso::io::map_to_json(f).dump() << '\n';
    } else {
      weakiso::io::write_map_text(os, f);
    }
  };
  if (a.out.empty()) {
    write(std::cout);
  } else {
    auto os = open_output(a.out);
    write(os);
  }
  return 0;
}

int cmd_classify(const Global& g, const std::string& file) {
  const auto f = weakiso::io::read_map_file(file);
  const auto label = weakiso::classify(f, weakiso::ScanOptions{g.threads});
  if (g.json) {
    emit(weakiso::io::label_json(label));
    return 0;
  }
  std::cout << "tag       " << weakiso::class_tag_name(label.tag) << '\n';
  std::cout << "spectrum  " << set_text(label.spectrum.members()) << '\n';
  if (label.recovered) {
    std::cout << "params    " << weakiso::io::params_to_json(*label.recovered).dump() << '\n';
  } else {
    std::cout << "params    none\n";
  }
  return 0;
}

int cmd_preserved(const Global& g, const std::string& file) {
  const auto f = weakiso::io::read_map_file(file);
  const auto D = weakiso::preserved_distances(f, weakiso::ScanOptions{g.threads});
  if (g.json) {
    emit(json{{"n", f.dim().value()}, {"spectrum", weakiso::io::spectrum_json(D)}});
  } else {
    std::cout << set_text(D.members()) << '\n';
  }
  return 0;
}

struct AutArgs {
  int n = 0;
  std::string P;
  std::string emit;
  bool order_only = false;
};

int cmd_aut(const Global& g, const AutArgs& a) {
  const weakiso::Dimension n(a.n);
  const auto P = weakiso::PreservedSet::from_list(n, weakiso::io::parse_distance_list(a.P));
  weakiso::SearchOptions so{g.threads, weakiso::Guards::from_env(), false};
  if (g.slow) so.guards.search_max_n = std::max(so.guards.search_max_n, 8);
  const auto G = weakiso::aut_group(n, P, so);
  if (!a.emit.empty()) {
    auto os = open_output(a.emit);
    for (const auto& gen : G.generators()) weakiso::io::write_map_text(os, gen);
  }
  const std::string order = weakiso::to_decimal(G.order());
  if (a.order_only) {
    if (g.json) {
      emit(json{{"order", order}});
    } else {
      std::cout << order << '\n';
    }
    return 0;
  }
  if (g.json) {
    json orbits = json::array();
    for (auto [point, len] : G.basic_orbits()) orbits.push_back({weakiso::Word(n, point).str(), len});
    emit(json{{"n", a.n}, {"P", P.members()}, {"order", order}, {"generators", G.generators().size()}, {"basic_orbits", orbits}});
  } else {
    std::cout << "n           " << a.n << '\n'
              << "P           " << set_text(P.members()) << '\n'
              << "order       " << order << '\n'
              << "generators  " << G.generators().size() << '\n';
  }
  return 0;
}

struct CountArgs {
  std::string what;
  int n = 0;
  int p = -1;
  int k = 0;
  int m = 0;
  int w = 0;
  int d = 0;
};

int cmd_count(const Global&, const CountArgs& a) {
  json out = json::array();
  if (a.what == "a2k") {
    const int p = a.p >= 0 ? a.p : a.n / 2;
    for (const auto& v : weakiso::A_profile(a.n, p).values) out.push_back(weakiso::to_decimal(v));
  } else if (a.what == "h") {
    for (int k = 1; 2 * (k + 1) <= a.n; ++k) {
      const auto r = weakiso::H_ratio(a.n, k);
      out.push_back(weakiso::to_decimal(numerator(r)) + "/" + weakiso::to_decimal(denominator(r)));
    }
  } else if (a.what == "b-odd") {
    out.push_back(std::to_string(weakiso::B_odd(a.k)));
  } else if (a.what == "case2") {
    const auto c = weakiso::case2_pair_counts(a.n);
    out.push_back(weakiso::to_decimal(c.shared));
    out.push_back(weakiso::to_decimal(c.disjoint));
  } else if (a.what == "weight") {
    out.push_back(weakiso::to_decimal(weakiso::count_weight_at_distance(a.n, a.m, a.w, a.d)));
  } else {
    throw weakiso::Error(weakiso::ErrorKind::InvalidParams, "unknown count '" + a.what + "'");
  }
  std::cout << out.dump() << '\n';
  return 0;
}

struct EnumerateArgs {
  std::string family;
  int n = 0;
  std::string emit;
};

int cmd_enumerate(const Global& g, const EnumerateArgs& a) {
  const auto fam = weakiso::family_from_tag(a.family);
  if (!fam) throw weakiso::Error(weakiso::ErrorKind::InvalidParams, "unknown family '" + a.family + "'");
  const weakiso::Dimension n(a.n);
  std::ofstream os;
  if (!a.emit.empty()) os = open_output(a.emit);
  weakiso::BigInt count = 0;
  weakiso::enumerate_family(*fam, n, [&](const weakiso::CubeMap& f) {
    ++count;
    if (os.is_open()) weakiso::io::write_map_text(os, f);
  });
  const auto size = weakiso::param_space_size(*fam, n);
  if (g.json) {
    emit(json{{"family", a.family}, {"n", a.n}, {"count", weakiso::to_decimal(count)}, {"param_space_size", weakiso::to_decimal(size)}});
  } else {
    std::cout << weakiso::to_decimal(count) << '\n';
  }
  return 0;
}

struct VerifyArgs {
  std::string id;
  std::vector<std::string> rest;
  int n = 0;
  int p = -1;
  std::string P;
  bool timing = false;
};

int parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw weakiso::Error(weakiso::ErrorKind::Parse, "bad number '" + s + "'");
}

int cmd_verify(const Global& g, VerifyArgs a) {
  // positional forms: "n=3", "p=5", "P={3,6}", or bare values in the order n, then p or P
  std::vector<std::string> bare;
  for (const auto& tok : a.rest) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      bare.push_back(tok);
      continue;
    }
    const auto key = tok.substr(0, eq);
    const auto val = tok.substr(eq + 1);
    if (key == "n") {
      a.n = parse_int(val);
    } else if (key == "p") {
      a.p = parse_int(val);
    } else if (key == "P") {
      a.P = val;
    } else {
      throw weakiso::Error(weakiso::ErrorKind::Parse, "unknown argument '" + tok + "'");
    }
  }
  if (!bare.empty() && a.n == 0) {
    a.n = parse_int(bare.front());
    bare.erase(bare.begin());
  }
  if (!bare.empty()) {
    if (a.id == "main" && a.P.empty()) {
      a.P = bare.front();
    } else if (a.id == "thm-krasin" && a.p < 0) {
      a.p = parse_int(bare.front());
    } else {
      throw weakiso::Error(weakiso::ErrorKind::Parse, "unexpected argument '" + bare.front() + "'");
    }
  }
  if (a.n == 0) throw weakiso::Error(weakiso::ErrorKind::InvalidParams, "verify needs n");

  weakiso::VerifyRequest req{a.id, a.n, std::nullopt, {}};
  if (a.p >= 0) req.p = a.p;
  if (a.id == "main") {
    if (a.P.empty()) throw weakiso::Error(weakiso::ErrorKind::InvalidParams, "verify main needs P");
    req.P = weakiso::io::parse_distance_list(a.P);
  }
  weakiso::VerifyOptions vo;
  vo.slow = g.slow;
  vo.threads = g.threads;
  const auto rep = weakiso::run_verify(req, vo);
  if (g.json) {
    emit(weakiso::report_json(rep, a.timing));
  } else {
    std::cout << rep.id << " n=" << rep.n << " P=" << set_text(rep.P) << ": " << (rep.pass ? "pass" : "FAIL") << '\n';
    for (const auto& c : rep.evidence["checks"]) {
      std::cout << "  [" << (c["pass"].get<bool>() ? "ok" : "FAIL") << "] " << c["check"].get<std::string>();
      if (c.contains("oracle_order")) {
        std::cout << "  oracle " << c["oracle_order"].get<std::string>() << " expected " << c["expected_order"].get<std::string>();
      }
      if (c.contains("generators")) std::cout << "  (" << c["failed"] << " of " << c["generators"] << " generators fail)";
      if (c.contains("class")) std::cout << "  " << c["class"].get<std::string>() << " closure " << c["closure"].dump();
      std::cout << '\n';
    }
    if (a.timing) std::cout << "  wall " << rep.wall_seconds << " s\n";
  }
  return rep.pass ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak isometries of the Boolean cube: build, recognise, count and verify."};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_flag("--json", g.json, "machine-readable JSON output");
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_flag("--slow", g.slow, "allow the slow verification tier (n=8 searches)");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();

  int rc = 0;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "materialise a family member as a map file");
  generate->add_option("--params", gen.params, "parameter JSON file");
  generate->add_option("--family", gen.family, "family tag for a random member (uses --seed)");
  generate->add_option("--n", gen.n, "dimension for --family");
  generate->add_option("--out", gen.out, "output path (default stdout)");
  generate->add_option("--format", gen.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  generate->callback([&] { rc = cmd_generate(g, gen); });

  std::string classify_file;
  auto* classify = app.add_subcommand("classify", "label a map with its classification class");
  classify->add_option("file", classify_file, "map file (text or JSON)")->required();
  classify->callback([&] { rc = cmd_classify(g, classify_file); });

  std::string preserved_file;
  auto* preserved = app.add_subcommand("preserved", "print the set of preserved distances");
  preserved->add_option("file", preserved_file, "map file (text or JSON)")->required();
  preserved->callback([&] { rc = cmd_preserved(g, preserved_file); });

  AutArgs aut;
  auto* autc = app.add_subcommand("aut", "compute the group of P-isometries");
  autc->add_option("--n", aut.n, "dimension")->required();
  autc->add_option("--P", aut.P, "comma-separated distances")->required();
  autc->add_option("--emit-generators", aut.emit, "write the generators as concatenated map files");
  autc->add_flag("--order-only", aut.order_only, "print only the group order");
  autc->callback([&] { rc = cmd_aut(g, aut); });

  CountArgs cnt;
  auto* count = app.add_subcommand("count", "closed-form word counts (a2k, h, b-odd, case2, weight)");
  count->add_option("what", cnt.what, "a2k | h | b-odd | case2 | weight")->required();
  count->add_option("--n", cnt.n, "dimension");
  count->add_option("--p", cnt.p, "target distance for a2k (default n/2 rounded down)");
  count->add_option("--k", cnt.k, "index for b-odd");
  count->add_option("--m", cnt.m, "weight of the fixed word");
  count->add_option("--w", cnt.w, "weight of the counted words");
  count->add_option("--d", cnt.d, "distance");
  count->callback([&] { rc = cmd_count(g, cnt); });

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "walk a family's parameter space");
  enumerate->add_option("--family", en.family, "family tag")->required();
  enumerate->add_option("--n", en.n, "dimension")->required();
  enumerate->add_option("--emit", en.emit, "write every member as concatenated map files");
  enumerate->callback([&] { rc = cmd_enumerate(g, en); });

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "check a classification statement against the search oracle");
  verify->add_option("id", ver.id, "lemma1 lemma2 thm2 thm3 thm4 thm5 thm6 thm7 sec3.5 thm-krasin main")
      ->required()
      ->check(CLI::IsMember(weakiso::verify_ids()));
  verify->add_option("args", ver.rest, "n=<k>, p=<p>, P=<list> (or bare values)");
  verify->add_option("--n", ver.n, "dimension");
  verify->add_option("--p", ver.p, "distance for thm-krasin");
  verify->add_option("--P", ver.P, "distances for main");
  verify->add_flag("--timing", ver.timing, "include wall time in the report");
  verify->callback([&] { rc = cmd_verify(g, ver); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  } catch (const weakiso::Error& e) {
    std::cerr << "weakiso: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "weakiso: internal error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
