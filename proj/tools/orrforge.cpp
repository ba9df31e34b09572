// orrforge: build finite groups, construct oriented connection sets, verify
// vertex stabilisers, classify, and reproduce the classification suite.
//
// Exit codes: 0 success, 1 negative verdict, 2 usage/parse error,
// 3 resource limit or timeout.  Reports go to stdout and are byte-identical
// across identical invocations; timing diagnostics go to stderr.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orrforge/classify.hpp"
#include "orrforge/io.hpp"
#include "orrforge/reproduce.hpp"

#ifndef ORRFORGE_DATA_DIR
#define ORRFORGE_DATA_DIR "data"
#endif

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace orrforge;

double env_timeout_seconds() {
  if (const char* v = std::getenv("ORRFORGE_TIMEOUT")) {
    char* end = nullptr;
    double s = std::strtod(v, &end);
    if (end != v && s > 0) return s;
  }
  return 3600.0;
}

FiniteGroup load_group_arg(const std::string& grp, const std::string& pres, int max_cosets) {
  if (!grp.empty()) return group_from_text(read_text_file(grp));
  if (!pres.empty()) {
    std::string name = pres;
    auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    if (name.size() > 5 && name.substr(name.size() - 5) == ".pres") name.resize(name.size() - 5);
    return coset_enumerate(parse_presentation(read_text_file(pres)), max_cosets, name);
  }
  throw argument_error("one of --group or --pres is required");
}

std::vector<Elt> parse_elt_list(const std::string& text) {
  std::vector<Elt> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

struct ConstructedSet {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<Elt> members;
  std::string family;
};

ConstructedSet run_construct(const std::string& family, const std::string& grp_file, int ell,
                             int kappa, int kparam, int order, const std::string& base,
                             const std::string& normal_gens) {
  ConstructedSet out;
  out.family = family;
  if (family == "abelian") {
    auto g = std::make_shared<const FiniteGroup>(group_from_text(read_text_file(grp_file)));
    auto s = abelian_2group_orr_set(*g);
    out.group = g;
    out.members = s.set.elements();
  } else if (family == "bi") {
    auto inst = bi_family_group(ell, kappa, false);
    auto c = construct_bi_set(inst.witness);
    out.group = inst.group;
    out.members = c.set.elements();
  } else if (family == "bii") {
    auto inst = bi_family_group(ell, kappa, true);
    auto c = construct_bii_set(inst.witness);
    out.group = inst.group;
    out.members = c.set.elements();
  } else if (family == "c") {
    auto a = direct_product(cyclic(4), elementary_abelian(kparam));
    auto inst = caseii_family_group(a, c_actions::swap_b1_b2(kparam), 0,
                                    "cfam" + std::to_string(kparam));
    auto d = prop_reduction_dispatch(inst.witness);
    if (d.kind != DispatchVerdict::Kind::CFamily)
      throw validation_error("constructed witness did not land in the c-family");
    auto c = construct_c_set(*d.c);
    out.group = inst.group;
    out.members = c.set.elements();
  } else if (family == "iii") {
    auto inst = base == "c4"
                    ? [&] {
                        CaseIIIParams P;
                        P.c4_base = true;
                        P.rank = (order == 4096 ? 7 : 6);
                        P.u3 = P.u4 = 1;
                        P.d = 2;
                        return caseiii_family_group(P, "caseiii-c4");
                      }()
                    : discover_caseiii_instance(order);
    auto c = construct_iii_set(inst.witness);
    out.group = inst.group;
    out.members = c.set.elements();
  } else if (family == "l1") {
    auto g = std::make_shared<const FiniteGroup>(group_from_text(read_text_file(grp_file)));
    Subset n = closure(*g, parse_elt_list(normal_gens));
    auto nview = subgroup_group(*g, n);
    auto tn = abelian_2group_orr_set(nview.group);
    Subset t(*g);
    tn.set.members.for_each([&](int i) { t.bits.set(nview.to_parent[i]); });
    auto ext = find_nonsplit_generators(*g, n, &t);
    auto s = l1_extension(*g, n, t, ext);
    out.group = g;
    out.members = s.elements();
  } else {
    throw argument_error("unknown family: " + family);
  }
  return out;
}

std::string verdict_witness_column(const Verdict& v) {
  std::ostringstream os;
  switch (v.kind) {
    case Verdict::Kind::HasORR: {
      os << "S={";
      for (std::size_t i = 0; i < v.orr_set.size(); ++i) os << (i ? "," : "") << v.orr_set[i];
      os << "}";
      if (!v.detail.empty()) os << " via " << v.detail;
      break;
    }
    case Verdict::Kind::NoORRCertified:
      os << "certificates=" << v.certificates.size();
      break;
    case Verdict::Kind::Exception:
      os << v.exception_name;
      break;
    case Verdict::Kind::GeneralisedDihedral:
      os << "-";
      break;
    default:
      os << v.reason;
  }
  return os.str();
}

int exit_code_for(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::HasORR: return 0;
    case Verdict::Kind::Unresolved: return 3;
    default: return 1;  // negative verdicts: no ORR exists
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oriented regular representation toolkit"};
  app.set_version_flag("--version", kVersion);
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", threads, "worker pool size");
  bool json_out = false;
  app.add_flag("--json", json_out, "mirror the report as JSON");

  // group build
  auto* cmd_group = app.add_subcommand("group", "build groups from presentations");
  auto* cmd_build = cmd_group->add_subcommand("build", "compile a presentation to a .grp file");
  std::string build_pres, build_out;
  int max_cosets = 65536;
  cmd_build->add_option("--pres", build_pres, "presentation file")->required();
  cmd_build->add_option("--max-cosets", max_cosets, "coset table limit");
  cmd_build->add_option("-o,--out", build_out, "output .grp path");

  // orr construct
  auto* cmd_orr = app.add_subcommand("orr", "connection-set constructions");
  auto* cmd_construct = cmd_orr->add_subcommand("construct", "run a construction family");
  std::string family, c_group_file, c_base = "elem", normal_gens, c_export, c_export_out;
  int c_ell = 2, c_kappa = 4, c_k = 6, c_order = 2048;
  cmd_construct->add_option("--family", family, "abelian|bi|bii|c|iii|l1")->required();
  cmd_construct->add_option("--group", c_group_file, ".grp input (abelian, l1)");
  cmd_construct->add_option("--ell", c_ell, "swapped-pair count (bi, bii)");
  cmd_construct->add_option("--kappa", c_kappa, "fixed-coordinate count (bi, bii)");
  cmd_construct->add_option("--k", c_k, "involution rank (c)");
  cmd_construct->add_option("--order", c_order, "target order (iii)");
  cmd_construct->add_option("--base", c_base, "elem|c4 (iii)");
  cmd_construct->add_option("--normal", normal_gens, "comma-separated generator indices (l1)");
  cmd_construct->add_option("--export", c_export, "also export the digraph: dot|edges");
  cmd_construct->add_option("--export-out", c_export_out, "digraph export path");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "vertex-stabiliser triviality of a digraph");
  std::string v_graph;
  int v_base = 0;
  double v_timeout = env_timeout_seconds();
  cmd_verify->add_option("--graph", v_graph, "edge-list file ('n m' header)")->required();
  cmd_verify->add_option("--base", v_base, "base vertex");
  cmd_verify->add_option("--timeout", v_timeout, "seconds");

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "classification verdict for one group");
  std::string cl_group, cl_pres;
  bool deep = false;
  double cl_timeout = env_timeout_seconds();
  cmd_classify->add_option("--group", cl_group, ".grp file");
  cmd_classify->add_option("--pres", cl_pres, ".pres file");
  cmd_classify->add_flag("--deep", deep, "orbit-reduced exhaustive search");
  cmd_classify->add_option("--timeout", cl_timeout, "seconds");
  std::string cl_witness_out;
  cmd_classify->add_option("--witness-out", cl_witness_out,
                           "write the witness / certificate list to this path");

  // export
  auto* cmd_export = app.add_subcommand("export", "export a Cayley digraph");
  std::string e_group, e_conn, e_format = "edges", e_out;
  cmd_export->add_option("--group", e_group, ".grp file")->required();
  cmd_export->add_option("--conn", e_conn, "comma-separated connection set")->required();
  cmd_export->add_option("--format", e_format, "dot|edges");
  cmd_export->add_option("-o,--out", e_out, "output path (default stdout)");

  // reproduce
  auto* cmd_repro = app.add_subcommand("reproduce", "run a reproduction suite");
  std::string suite = "theorem1", data_dir = ORRFORGE_DATA_DIR;
  int tier = 1;
  cmd_repro->add_option("--suite", suite, "suite name (theorem1)");
  cmd_repro->add_option("--tier", tier, "1 (<5 min), 2 (<1 h), 3 (unbounded)");
  cmd_repro->add_option("--data", data_dir, "data directory");

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed_note = [&] {
    std::chrono::duration<double> d = std::chrono::steady_clock::now() - t0;
    std::cerr << "# elapsed " << d.count() << "s\n";
  };

  try {
    if (*cmd_build) {
      FiniteGroup g = load_group_arg("", build_pres, max_cosets);
      std::string out = build_out.empty() ? g.name() + ".grp" : build_out;
      write_file(out, group_to_text(g));
      std::cout << "group\t" << g.name() << "\torder\t" << g.order() << "\twrote\t" << out << "\n";
      elapsed_note();
      return 0;
    }

    if (*cmd_construct) {
      auto c = run_construct(family, c_group_file, c_ell, c_kappa, c_k, c_order, c_base,
                             normal_gens);
      const FiniteGroup& g = *c.group;
      auto words = element_words(g);
      std::cout << "family\t" << c.family << "\tgroup\t" << g.name() << "\torder\t" << g.order()
                << "\t|S|\t" << c.members.size() << "\n";
      for (Elt s : c.members) std::cout << s << "\t" << words[s] << "\n";
      if (json_out) {
        nlohmann::json j{{"command", "orr construct"},
                         {"family", c.family},
                         {"group", g.name()},
                         {"order", g.order()},
                         {"set", c.members},
                         {"version", kVersion}};
        std::cout << j.dump() << "\n";
      }
      if (!c_export.empty()) {
        auto cay = cayley(g, c.members);
        std::string payload = c_export == "dot" ? to_dot(cay.graph) : to_edge_list(cay.graph);
        if (c_export_out.empty())
          std::cout << payload;
        else
          write_file(c_export_out, payload);
      }
      elapsed_note();
      return 0;
    }

    if (*cmd_verify) {
      Digraph g = parse_edge_list(read_text_file(v_graph));
      SearchLimits lim;
      lim.timeout = std::chrono::duration<double>(v_timeout);
      auto rep = stabiliser_is_trivial(g, v_base, lim);
      if (rep.trivial) {
        std::cout << "TRIVIAL\n";
        elapsed_note();
        return 0;
      }
      std::cout << "WITNESS " << perm_cycles(*rep.witness) << "\n";
      elapsed_note();
      return 1;
    }

    if (*cmd_classify) {
      FiniteGroup g = load_group_arg(cl_group, cl_pres, 65536);
      ClassifyOptions opts;
      opts.deep = deep;
      opts.threads = threads;
      opts.timeout = std::chrono::duration<double>(cl_timeout);
      Verdict v = classify(g, opts);
      std::string column = verdict_witness_column(v);
      if (!cl_witness_out.empty()) {
        std::ostringstream os;
        os << "# " << g.name() << " " << verdict_name(v.kind);
        if (v.kind == Verdict::Kind::Exception) os << " " << v.exception_name;
        os << "\n";
        if (v.kind == Verdict::Kind::HasORR) {
          for (Elt x : v.orr_set) os << x << "\n";
        } else if (v.kind == Verdict::Kind::NoORRCertified) {
          for (const auto& c : v.certificates) {
            os << "S={";
            for (std::size_t i = 0; i < c.candidate.size(); ++i)
              os << (i ? "," : "") << c.candidate[i];
            os << "} witness=" << perm_cycles(c.witness)
               << (c.non_generating ? " (non-generating)" : "") << "\n";
          }
        }
        write_file(cl_witness_out, os.str());
        column = cl_witness_out;
      }
      std::cout << g.name() << "\t" << g.order() << "\t" << verdict_name(v.kind) << "\t"
                << column << "\n";
      if (json_out) {
        nlohmann::json j{{"command", "classify"},
                         {"inputs", {{"name", g.name()}, {"order", g.order()}}},
                         {"verdict", verdict_name(v.kind)},
                         {"witness", verdict_witness_column(v)},
                         {"seed", BruteOptions{}.random_seed},
                         {"version", kVersion}};
        std::cout << j.dump() << "\n";
      }
      elapsed_note();
      return exit_code_for(v);
    }

    if (*cmd_export) {
      FiniteGroup g = group_from_text(read_text_file(e_group));
      auto s = parse_elt_list(e_conn);
      auto cay = cayley(g, s);
      std::string payload = e_format == "dot" ? to_dot(cay.graph) : to_edge_list(cay.graph);
      if (e_out.empty())
        std::cout << payload;
      else
        write_file(e_out, payload);
      elapsed_note();
      return 0;
    }

    if (*cmd_repro) {
      if (suite != "theorem1") throw argument_error("unknown suite: " + suite);
      auto results = run_theorem1_suite(tier, data_dir, threads);
      std::cout << results_tsv(results);
      bool all = true;
      for (const auto& r : results) all = all && r.passed;
      if (json_out) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : results)
          arr.push_back({{"criterion", r.id}, {"tier", r.tier}, {"passed", r.passed},
                         {"detail", r.detail}});
        nlohmann::json j{{"command", "reproduce"},
                         {"suite", suite},
                         {"results", arr},
                         {"seed", BruteOptions{}.random_seed},
                         {"version", kVersion}};
        std::cout << j.dump() << "\n";
      }
      elapsed_note();
      return all ? 0 : 1;
    }
  } catch (const timeout_error& e) {
    std::cerr << "timeout: " << e.what() << " (nodes explored: " << e.nodes_explored() << ")\n";
    return 3;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const argument_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
