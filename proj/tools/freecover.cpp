// freecover: command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "freecover/covers.hpp"
#include "freecover/error.hpp"
#include "freecover/homology.hpp"
#include "freecover/nilpotent.hpp"
#include "freecover/stallings.hpp"
#include "freecover/surfaces.hpp"
#include "freecover/whitehead.hpp"

using namespace freecover;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::vector<int> q_list{2, 3};
  int max_depth = 2;
  int max_vertices = kDefaultMaxVertices;
  int nilpotent_cap = kDefaultMagnusCap;
  unsigned long seed = 1;
  std::string output = "json";

  json to_json() const {
    return {{"q_list", q_list}, {"max_depth", max_depth}, {"max_vertices", max_vertices},
            {"nilpotent_cap", nilpotent_cap}, {"seed", seed}, {"output", output}};
  }
};

/// A flag value failed to parse or validate.
struct FlagError : std::runtime_error {
  FlagError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

template <class F>
auto with_flag(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw FlagError(flag, e.what());
  }
}

struct Outcome {
  json result;
  int code = 0;
  std::string dot;  // for --output dot
};

int infer_rank(const std::vector<std::string>& words, int requested) {
  if (requested > 0) return requested;
  int rank = 2;
  for (const auto& w : words) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const char c = w[i];
      if (c >= 'a' && c <= 'z') rank = std::max(rank, c - 'a' + 1);
      if (c >= 'A' && c <= 'Z') rank = std::max(rank, c - 'A' + 1);
      if (c == 'x') {
        std::size_t j = i + 1;
        int v = 0;
        while (j < w.size() && std::isdigit(static_cast<unsigned char>(w[j]))) v = v * 10 + (w[j++] - '0');
        if (j > i + 1) {
          rank = std::max(rank, v);
          i = j - 1;
        }
      }
    }
  }
  return rank;
}

Endomorphism parse_phi(const std::string& text, int requested_rank) {
  return with_flag("--phi", [&] {
    const int images = static_cast<int>(std::count(text.begin(), text.end(), ',')) + 1;
    const int rank = requested_rank > 0 ? requested_rank : images;
    return Endomorphism::parse(text, rank);
  });
}

Word parse_word(const std::string& flag, const std::string& text, int rank) {
  return with_flag(flag, [&] { return Word::parse(text, rank); });
}

BasedCover cover_at(int n, int q, int level, int max_vertices) {
  if (level < 0) throw FlagError("--level", "must be non-negative");
  if (level == 0) return BasedCover(FiniteQuotient::trivial(n));
  return with_flag("--q", [&] { return build_tower(n, q, level, max_vertices).level(level).cover; });
}

std::string render_text(const json& j, const std::string& indent = "") {
  std::ostringstream out;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !(v.is_array() && (v.empty() || !v.front().is_structured()))) {
        out << indent << k << ":\n" << render_text(v, indent + "  ");
      } else {
        out << indent << k << ": " << v.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured()) {
        out << indent << "-\n" << render_text(v, indent + "  ");
      } else {
        out << indent << "- " << v.dump() << "\n";
      }
    }
  } else {
    out << indent << j.dump() << "\n";
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual homology of free-group endomorphisms on finite covers of the rose"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  if (const char* env = std::getenv("FREECOVER_MAX_VERTICES")) {
    try {
      config.max_vertices = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "FREECOVER_MAX_VERTICES: not an integer: " << env << "\n";
      return 2;
    }
  }
  app.add_option("--output", config.output, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--seed", config.seed, "recorded in every output");
  app.add_option("--max-vertices", config.max_vertices, "vertex budget per tower level")->check(CLI::PositiveNumber);
  app.add_option("--q-list", config.q_list, "moduli searched by certify/witness-5/surface")->delimiter(',');
  app.add_option("--max-depth", config.max_depth, "tower depth searched")->check(CLI::NonNegativeNumber);
  app.add_option("--nilpotent-cap", config.nilpotent_cap, "Magnus truncation bound")->check(CLI::Range(2, kMaxMagnusCap));

  std::string command;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&command, name] { command = name; });
    return s;
  };

  // fold
  std::vector<std::string> fold_words;
  int fold_n = 0;
  auto* fold_cmd = sub("fold", "folded Stallings graph of a list of generators");
  fold_cmd->add_option("words", fold_words, "generators")->required();
  fold_cmd->add_option("--n", fold_n, "rank (default: inferred)");

  // cover
  int cover_n = 2, cover_q = 2;
  auto* cover_cmd = sub("cover", "mod-q homology cover of R_n");
  cover_cmd->add_option("--n", cover_n)->check(CLI::Range(2, 64));
  cover_cmd->add_option("--q", cover_q);

  // tower
  int tower_n = 2, tower_q = 2, tower_depth = 1;
  auto* tower_cmd = sub("tower", "tower of mod-q homology covers");
  tower_cmd->add_option("--n", tower_n)->check(CLI::Range(2, 64));
  tower_cmd->add_option("--q", tower_q);
  tower_cmd->add_option("--depth", tower_depth);

  // separate
  std::string sep_word;
  int sep_n = 0, sep_q = 2, sep_depth = 2;
  auto* sep_cmd = sub("separate", "first tower level not containing a word");
  sep_cmd->add_option("word", sep_word)->required();
  sep_cmd->add_option("--n", sep_n);
  sep_cmd->add_option("--q", sep_q);
  sep_cmd->add_option("--depth", sep_depth);

  // homrep
  std::string hom_phi;
  int hom_n = 0, hom_q = 2, hom_level = 1;
  auto* hom_cmd = sub("homrep", "matrix of the based lift of an endomorphism");
  hom_cmd->add_option("--phi", hom_phi)->required();
  hom_cmd->add_option("--n", hom_n);
  hom_cmd->add_option("--q", hom_q);
  hom_cmd->add_option("--level", hom_level);

  // deck
  std::string deck_element;
  int deck_n = 2, deck_q = 2, deck_level = 1;
  auto* deck_cmd = sub("deck", "matrix of a deck transformation");
  deck_cmd->add_option("--element", deck_element, "digit string (level 1) or word")->required();
  deck_cmd->add_option("--n", deck_n)->check(CLI::Range(2, 64));
  deck_cmd->add_option("--q", deck_q);
  deck_cmd->add_option("--level", deck_level);

  // check-epi
  std::string epi_phi;
  int epi_n = 0;
  auto* epi_cmd = sub("check-epi", "exact surjectivity by folding");
  epi_cmd->add_option("--phi", epi_phi)->required();
  epi_cmd->add_option("--n", epi_n);

  // certify
  std::string cert_phi, cert_goal = "non-epi";
  int cert_n = 0;
  auto* cert_cmd = sub("certify", "search mod-q towers for a non-surjectivity certificate");
  cert_cmd->add_option("--phi", cert_phi)->required();
  cert_cmd->add_option("--n", cert_n);
  cert_cmd->add_option("--goal", cert_goal)->check(CLI::IsMember({"non-epi", "nontrivial"}));

  // nilpotent
  std::string nil_phi, nil_word;
  int nil_n = 0, nil_k = 0;
  auto* nil_cmd = sub("nilpotent", "lower central series checks (or a Magnus expansion with --magnus)");
  nil_cmd->add_option("--phi", nil_phi);
  nil_cmd->add_option("--magnus", nil_word, "print the truncated Magnus series of a word");
  nil_cmd->add_option("--n", nil_n);
  nil_cmd->add_option("--k", nil_k, "level (default: --nilpotent-cap)");

  // whitehead
  std::string wh_word;
  int wh_n = 0;
  auto* wh_cmd = sub("whitehead", "Whitehead graph, cut vertices and primitivity evidence");
  wh_cmd->add_option("word", wh_word)->required();
  wh_cmd->add_option("--n", wh_n);

  // witness-5
  int wit_n = 2;
  bool wit_variant = false;
  auto* wit_cmd = sub("witness-5", "conjugating endomorphism onto all nilpotent quotients but not onto F_n");
  wit_cmd->add_option("--n", wit_n)->check(CLI::Range(2, 16));
  wit_cmd->add_flag("--variant", wit_variant, "use the alternative exponent pattern for alpha");

  // surface
  std::string surf_rotation = "a b A B", surf_action = "info", surf_x, surf_y, surf_phi;
  int surf_q = 2, surf_depth = 1;
  auto* surf_cmd = sub("surface", "ribbon covers, elevations and the intersection form");
  surf_cmd->add_option("action", surf_action, "info | elevations | disjoint | preserves")
      ->check(CLI::IsMember({"info", "elevations", "disjoint", "preserves"}));
  surf_cmd->add_option("--rotation", surf_rotation);
  surf_cmd->add_option("--q", surf_q);
  surf_cmd->add_option("--depth", surf_depth);
  surf_cmd->add_option("--x", surf_x);
  surf_cmd->add_option("--y", surf_y);
  surf_cmd->add_option("--phi", surf_phi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  Outcome out;
  try {
    if (command == "fold") {
      const int n = infer_rank(fold_words, fold_n);
      std::vector<Word> gens;
      for (const auto& w : fold_words) gens.push_back(parse_word("words", w, n));
      const LabeledGraph g = graph_from_generators(n, gens);
      out.result = {{"graph", g.to_json()}, {"rank", rank(g)}, {"is_rose", g.is_rose()}, {"is_cover", g.is_cover()}};
      out.dot = g.to_dot();
    } else if (command == "cover") {
      const BasedCover c(with_flag("--q", [&] { return mod_q_quotient(cover_n, cover_q); }));
      out.result = c.to_json();
      out.dot = c.to_dot();
    } else if (command == "tower") {
      if (tower_depth < 1) throw FlagError("--depth", "must be at least 1");
      CoverTower t(tower_n, tower_q, config.max_vertices);
      try {
        for (int k = 0; k < tower_depth; ++k) with_flag("--q", [&] { return t.extend(); });
      } catch (const BudgetExceeded& e) {
        out.code = 1;
        out.result["budget_exceeded"] = {{"message", e.what()}, {"level_reached", e.level_reached()}};
      }
      out.result["tower"] = t.to_json();
      out.result["descent_validated"] = t.validate_descent();
    } else if (command == "separate") {
      const int n = infer_rank({sep_word}, sep_n);
      const Word w = parse_word("word", sep_word, n);
      const auto s = with_flag("word", [&] { return separate_word(w, sep_q, sep_depth, config.max_vertices); });
      out.result = {{"word", w.str()}, {"q", sep_q}, {"levels_examined", s.levels_examined},
                    {"budget_exhausted", s.budget_exhausted}};
      out.result["level"] = s.level ? json(*s.level) : json(nullptr);
      out.result["verdict"] = s.level ? "separated" : "not separated";
      out.code = s.level ? 0 : 1;
    } else if (command == "homrep") {
      const Endomorphism phi = parse_phi(hom_phi, hom_n);
      const BasedCover c = cover_at(phi.rank(), hom_q, hom_level, config.max_vertices);
      const IntMatrix m = lift_matrix(phi, c);
      const Integer det = m.determinant();
      out.result = {{"endomorphism", phi.str()}, {"q", hom_q}, {"level", hom_level}, {"cover_degree", c.degree()},
                    {"matrix", to_json(m)}, {"trace", to_json(m.trace())}, {"determinant", to_json(det)},
                    {"snf_diagonal", to_json(smith_normal_form(m).diagonal())}, {"epi", det == 1 || det == -1}};
    } else if (command == "deck") {
      const BasedCover c = cover_at(deck_n, deck_q, deck_level, config.max_vertices);
      const int g = with_flag("--element", [&] { return c.quotient().parse_element(deck_element); });
      const IntMatrix m = deck_matrix(c, g);
      out.result = {{"element", c.quotient().label(g)}, {"q", deck_q}, {"level", deck_level},
                    {"matrix", to_json(m)}, {"trace", to_json(m.trace())}, {"identity", m.is_identity()}};
    } else if (command == "check-epi") {
      const Endomorphism phi = parse_phi(epi_phi, epi_n);
      const bool surjective = is_surjective(phi);
      const LabeledGraph g = graph_from_generators(phi.rank(), phi.images());
      out.result = {{"endomorphism", phi.str()}, {"surjective", surjective},
                    {"image_graph", g.to_json()},
                    {"abelianization_determinant", to_json(abelianization_matrix(phi).determinant())}};
      out.dot = g.to_dot();
      out.code = surjective ? 0 : 1;
    } else if (command == "certify") {
      const Endomorphism phi = parse_phi(cert_phi, cert_n);
      SearchOptions o{config.q_list, config.max_depth, config.max_vertices,
                      cert_goal == "nontrivial" ? CertificateGoal::kNontrivial : CertificateGoal::kNonEpimorphism};
      const auto s = with_flag("--q-list", [&] { return find_nonsurjectivity_certificate(phi, o); });
      out.result = to_json(s);
      out.result["goal"] = to_string(o.goal);
      out.code = s.certificate ? 0 : 1;
    } else if (command == "nilpotent") {
      const int k = nil_k > 0 ? nil_k : config.nilpotent_cap;
      if (!nil_word.empty()) {
        const int n = infer_rank({nil_word}, nil_n);
        const Word w = parse_word("--magnus", nil_word, n);
        out.result = {{"word", w.str()}, {"cap", k},
                      {"series", with_flag("--k", [&] { return magnus(w, k).str(); })}};
      } else if (!nil_phi.empty()) {
        const Endomorphism phi = parse_phi(nil_phi, nil_n);
        if (k < 2 || k > kMaxMagnusCap) throw FlagError("--k", "must be in 2.." + std::to_string(kMaxMagnusCap));
        auto epi = json::array();
        bool all = true;
        for (int j = 2; j <= k; ++j) {
          const bool e = is_epi_on_nilpotent_quotient(phi, j);
          all = all && e;
          epi.push_back({{"k", j}, {"epi", e}});
        }
        auto layers = json::array();
        for (int j = 1; j <= std::min(k, 3); ++j) {
          layers.push_back({{"k", j}, {"trivial", acts_trivially_on_lcs_quotient(phi, j, left_normed_commutators(phi.rank(), j))}});
        }
        out.result = {{"endomorphism", phi.str()}, {"epi_on_quotients", epi}, {"trivial_on_layers", layers}};
        out.code = all ? 0 : 1;
      } else {
        throw FlagError("--phi", "one of --phi or --magnus is required");
      }
    } else if (command == "whitehead") {
      const int n = infer_rank({wh_word}, wh_n);
      const Word w = parse_word("word", wh_word, n);
      const WhiteheadGraph g = with_flag("word", [&] { return whitehead_graph(w); });
      const auto c = is_connected_no_cut_vertex(g);
      std::vector<std::string> cuts, isolated;
      for (int v : c.cut_vertices) cuts.push_back(whitehead_vertex_label(v));
      for (int v : c.isolated) isolated.push_back(whitehead_vertex_label(v));
      auto edges = json::array();
      for (const auto& [a, b] : g.edges) edges.push_back({whitehead_vertex_label(a), whitehead_vertex_label(b)});
      const bool certified = c.connected && c.cut_vertices.empty();
      out.result = {{"word", cyclic_reduce(w).core.str()}, {"edges", edges}, {"connected", c.connected},
                    {"connected_occurring", c.connected_occurring}, {"isolated", isolated},
                    {"cut_vertices", cuts}, {"not_separable_certified", certified}};
      try {
        const auto r = whitehead_reduce(w);
        out.result["minimal_length"] = r.minimal_length;
        out.result["reduced_word"] = r.reduced_word.str();
        out.result["primitive"] = r.minimal_length == 1;
      } catch (const BudgetExceeded& e) {
        out.result["minimal_length"] = nullptr;
        out.result["reduction_skipped"] = e.what();
      }
      out.dot = to_dot(g);
      out.code = certified ? 0 : 1;
    } else if (command == "witness-5") {
      WitnessOptions o;
      o.nilpotent_cap = config.nilpotent_cap;
      o.search = {config.q_list, config.max_depth, config.max_vertices, CertificateGoal::kNonEpimorphism};
      o.use_variant = wit_variant;
      const auto r = conjugation_witness(wit_n, o);
      out.result = to_json(r);
      bool nil = true;
      for (const auto& [k, e] : r.nilpotent_epi) nil = nil && e;
      const bool ok = !r.surjective && nil && r.not_separable_certified && r.certificate.certificate.has_value();
      out.result["all_evidence"] = ok;
      out.code = ok ? 0 : 1;
    } else if (command == "surface") {
      const RibbonStructure base = with_flag("--rotation", [&] { return RibbonStructure::parse(surf_rotation); });
      const int n = base.rank();
      const auto family = with_flag("--q", [&] { return ribbon_family(base, {surf_q}, surf_depth, config.max_vertices); });
      out.result["rotation"] = base.str();
      out.result["base"] = {{"genus", base.genus()}, {"boundary", base.boundary_count()}};
      if (surf_action == "info") {
        auto covers = json::array();
        for (const auto& rc : family) covers.push_back(rc.to_json());
        out.result["covers"] = covers;
      } else if (surf_action == "elevations") {
        if (surf_x.empty()) throw FlagError("--x", "required for elevations");
        const Word x = parse_word("--x", surf_x, n);
        auto covers = json::array();
        bool all = true;
        for (const auto& rc : family) {
          const auto v = with_flag("--x", [&] { return elevations(x, rc); });
          json j = to_json(v);
          j["cover"] = rc.id();
          j["isotropic"] = is_isotropic(v, rc);
          all = all && j["isotropic"].get<bool>();
          covers.push_back(j);
        }
        out.result["covers"] = covers;
        out.result["isotropic_everywhere"] = all;
      } else if (surf_action == "disjoint") {
        if (surf_x.empty() || surf_y.empty()) throw FlagError("--x/--y", "both required for disjoint");
        const auto v = with_flag("--x/--y", [&] {
          return disjointness_search(Word::parse(surf_x, n), Word::parse(surf_y, n), family);
        });
        out.result["disjointness"] = to_json(v);
        out.code = v.witnessed ? 0 : 1;
      } else {
        const Endomorphism psi = parse_phi(surf_phi, n);
        const auto r = preserves_intersection_form(psi, family);
        out.result["report"] = to_json(r);
        out.code = r.all_pass ? 0 : 1;
      }
    }
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 1;
  }

  if (config.output == "dot") {
    if (out.dot.empty()) {
      std::cerr << "error: --output: dot is not available for " << command << "\n";
      return 2;
    }
    std::cout << out.dot;
    return out.code;
  }
  json envelope{{"command", command}, {"version", kVersion}, {"seed", config.seed},
                {"config", config.to_json()}, {"result", out.result}};
  if (config.output == "text") {
    std::cout << render_text(envelope);
  } else {
    std::cout << envelope.dump(2) << "\n";
  }
  return out.code;
}
