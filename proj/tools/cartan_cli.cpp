#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cartan/cartan.hpp"

using namespace cartan;
using json_io::json;

namespace {

enum Exit : int { kOk = 0, kFailed = 1, kBadInput = 2, kContext = 3, kOverflow = 4, kArithmetic = 5 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const std::string& path) { return json_io::parse(read_file(path), path); }

/// A flag value naming a JSON file is loaded; anything else is taken as a bare name.
json file_or_name(const std::string& value) {
  if (std::filesystem::is_regular_file(value)) return load(value);
  if (value.size() > 5 && value.ends_with(".json")) throw ParseError("cannot read '" + value + "'");
  return json(value);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int report_error(const char* kind, const std::string& what, int code, const json& extra = json::object()) {
  json j = {{"error", kind}, {"message", what}};
  j.update(extra);
  std::cerr << j.dump() << "\n";
  return code;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad integer list '" + s + "'");
    }
  }
  return out;
}

std::shared_ptr<const BAlgebra> module_B(const AnyModule& M) {
  if (const auto* m = std::get_if<MapModule>(&M)) return m->B_ptr();
  return std::make_shared<const BAlgebra>(BAlgebra::complex());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact bracket, module-action and identity checks for Lie algebras of vector fields on tori"};
  app.require_subcommand(1);

  // bracket
  auto* cmd_bracket = app.add_subcommand("bracket", "Bracket of two elements, printed in canonical order");
  std::string bx, by, b_spec;
  std::optional<int> b_n;
  cmd_bracket->add_option("x", bx, "Element JSON file")->required();
  cmd_bracket->add_option("y", by, "Element JSON file")->required();
  cmd_bracket->add_option("--n", b_n, "Context N (default: taken from the elements)");
  cmd_bracket->add_option("--B", b_spec, "Context algebra B: C, truncpolyK, or a JSON file (default C)");

  // act
  auto* cmd_act = app.add_subcommand("act", "Apply an element, or a word of elements, to a module vector");
  std::string a_module, a_vector;
  std::vector<std::string> a_elements;
  cmd_act->add_option("--module", a_module, "Module JSON file")->required();
  cmd_act->add_option("--vector", a_vector, "Vector JSON file")->required();
  cmd_act->add_option("--element", a_elements, "Element JSON file; repeat for a word, the last one acts first")
      ->required();

  // weights
  auto* cmd_weights = app.add_subcommand("weights", "Dimension of each graded piece in the window");
  std::string w_module;
  cmd_weights->add_option("--module", w_module, "Module JSON file")->required();

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "Run identity suites and print verdict JSON");
  bool v_all = false, v_timing = false;
  std::vector<std::string> v_suites;
  std::string v_preset = "default", v_config, v_B, v_rep, v_rep_h, v_c, v_conv;
  std::optional<int> v_n, v_window, v_samples;
  std::optional<std::uint64_t> v_seed;
  std::optional<std::size_t> v_budget;
  auto* all_flag = cmd_verify->add_flag("--all", v_all, "Run every suite");
  cmd_verify->add_option("--suite", v_suites, "Suite name; repeatable")->excludes(all_flag);
  cmd_verify->add_option("--preset", v_preset, "Base configuration (see 'presets')");
  cmd_verify->add_option("--config", v_config, "Config JSON overlaid on the preset");
  cmd_verify->add_option("--n", v_n, "N");
  cmd_verify->add_option("--window", v_window, "Window half-width K");
  cmd_verify->add_option("--B", v_B, "B: C, truncpolyK, or a JSON file");
  cmd_verify->add_option("--rep", v_rep, "Rep for S_N modules: natural, trivial, traceless, or a JSON file");
  cmd_verify->add_option("--rep-h", v_rep_h, "Rep for H~_N modules: natural, trivial, traceless, or a JSON file");
  cmd_verify->add_option("--c", v_c, "Constant c, e.g. 2 or 1/2");
  cmd_verify->add_option("--seed", v_seed, "Seed for sampled parameters and cases");
  cmd_verify->add_option("--budget", v_budget, "Case budget per suite before sampling");
  cmd_verify->add_option("--samples", v_samples, "Parameter samples per module suite");
  cmd_verify->add_option("--convention", v_conv, "Pair range for H~_N: i<j, i<=j, i!=j, all, witt");
  cmd_verify->add_flag("--timing", v_timing, "Include elapsedMs in each verdict");

  // diagnose-injectivity
  auto* cmd_inj = app.add_subcommand("diagnose-injectivity", "Rank of t^r(b) between adjacent window layers");
  std::string i_module, i_r, i_b;
  cmd_inj->add_option("--module", i_module, "Map module JSON file")->required();
  cmd_inj->add_option("--r", i_r, "Degree, comma separated")->required();
  cmd_inj->add_option("--b", i_b, "B element: basis name, or a JSON file with coordinates")->required();

  // presets
  auto* cmd_presets = app.add_subcommand("presets", "List named configurations");
  std::string p_name;
  cmd_presets->add_option("name", p_name, "Print one preset's full configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*cmd_bracket) {
      std::shared_ptr<const BAlgebra> B;
      if (!b_spec.empty()) B = std::make_shared<const BAlgebra>(json_io::balgebra_from_json(file_or_name(b_spec)));
      LieElem x = json_io::element_from_json(load(bx), b_n, B);
      LieElem y = json_io::element_from_json(load(by), b_n, B ? B : x.context().B_ptr());
      emit(json_io::to_json(bracket(x, y)));
      return kOk;
    }

    if (*cmd_act) {
      AnyModule M = json_io::module_from_json(load(a_module));
      ModVec v = json_io::modvec_from_json(load(a_vector));
      if (v.n() != n_of(M) || v.d() != dim_of(M))
        throw ContextMismatch("vector shape (n=" + std::to_string(v.n()) + ", d=" + std::to_string(v.d()) +
                              ") does not match the module");
      std::vector<LieElem> word;
      for (const auto& path : a_elements) word.push_back(json_io::element_from_json(load(path), n_of(M), module_B(M)));
      emit(json_io::to_json(apply_word(word, v, M)));
      return kOk;
    }

    if (*cmd_weights) {
      AnyModule M = json_io::module_from_json(load(w_module));
      json out = json::array();
      for (const auto& [s, d] :
           std::visit([](const auto& m) { return weight_multiplicities(m, m.window()); }, M))
        out.push_back({{"deg", json_io::to_json(s)}, {"dim", d}});
      emit(out);
      return kOk;
    }

    if (*cmd_verify) {
      SuiteConfig cfg = preset(v_preset).config;
      if (!v_config.empty()) cfg = json_io::config_from_json(load(v_config), cfg);
      json overlay = json::object();
      if (v_n) overlay["n"] = *v_n;
      if (v_window) overlay["window"] = *v_window;
      if (!v_B.empty()) overlay["B"] = file_or_name(v_B);
      if (!v_rep.empty()) overlay["rep"] = file_or_name(v_rep);
      if (!v_rep_h.empty()) overlay["repH"] = file_or_name(v_rep_h);
      if (!v_c.empty()) overlay["c"] = v_c;
      if (v_seed) overlay["seed"] = *v_seed;
      if (v_budget) overlay["caseBudget"] = *v_budget;
      if (v_samples) overlay["samples"] = *v_samples;
      if (!v_conv.empty()) overlay["convention"] = v_conv;
      cfg = json_io::config_from_json(overlay, cfg);
      try {
        cfg.validate();
      } catch (const Error& e) {
        return report_error("config", e.what(), kBadInput);
      }
      if (!v_all && v_suites.empty()) return report_error("usage", "verify needs --all or --suite", kBadInput);
      std::vector<std::string> names = v_all ? suite_names() : v_suites;
      for (const auto& n : names)
        if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
          return report_error("usage", "unknown suite '" + n + "'", kBadInput);
      json verdicts = json::array();
      bool passed = true;
      for (const auto& n : names) {
        Verdict v = run_suite(n, cfg);
        passed = passed && v.passed();
        verdicts.push_back(json_io::to_json(v, v_timing));
      }
      emit({{"passed", passed}, {"verdicts", verdicts}});
      return passed ? kOk : kFailed;
    }

    if (*cmd_inj) {
      AnyModule any = json_io::module_from_json(load(i_module));
      const auto* M = std::get_if<MapModule>(&any);
      if (!M) throw PreconditionError("diagnose-injectivity needs a map-S or map-H module");
      std::vector<int> rv = parse_int_list(i_r);
      if (static_cast<int>(rv.size()) != M->n()) throw ContextMismatch("--r has the wrong length");
      BElem b = [&] {
        const auto& names = M->B().names();
        auto it = std::find(names.begin(), names.end(), i_b);
        if (it != names.end()) return M->B().basis(static_cast<int>(it - names.begin()));
        auto coords = json_io::scalars_from_json(load(i_b), "b");
        if (static_cast<int>(coords.size()) != M->B().dim()) throw ContextMismatch("b has the wrong dimension");
        return BElem(coords);
      }();
      emit(json_io::to_json(injectivity_diagnostic(ExpVec(rv), b, *M, M->window())));
      return kOk;
    }

    if (*cmd_presets) {
      if (!p_name.empty()) {
        const Preset& p = preset(p_name);
        emit({{"name", p.name}, {"description", p.description}, {"config", json_io::to_json(p.config)}});
      } else {
        json out = json::array();
        for (const auto& p : presets()) out.push_back({{"name", p.name}, {"description", p.description}});
        emit(out);
      }
      return kOk;
    }
  } catch (const WindowOverflow& e) {
    return report_error("window overflow", e.what(), kOverflow, {{"stage", e.stage()}});
  } catch (const ContextMismatch& e) {
    return report_error("context mismatch", e.what(), kContext);
  } catch (const LengthMismatch& e) {
    return report_error("context mismatch", e.what(), kContext);
  } catch (const ArithmeticOverflow& e) {
    return report_error("arithmetic overflow", e.what(), kArithmetic);
  } catch (const Error& e) {
    return report_error("invalid input", e.what(), kBadInput);
  } catch (const std::exception& e) {
    return report_error("invalid input", e.what(), kBadInput);
  }
  return kOk;
}
