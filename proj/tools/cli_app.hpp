// Copyright 2026 The qdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdb/io.hpp"
#include "qdb/qdb.hpp"

namespace qdb::cli {

using io::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitNotEvaluable = 2;
constexpr int kExitInputError = 3;

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    default: return kExitNotEvaluable;
  }
}

struct Report {
  std::string command;
  std::string kind;
  Verdict verdict = Verdict::fail;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> summary;
  std::optional<CMatrix> basis;
  std::vector<std::string> notes;
  json details = json::object();

  bool operator==(const Report& o) const {
    const bool same_basis = basis.has_value() == o.basis.has_value() && (!basis || *basis == *o.basis);
    return command == o.command && kind == o.kind && verdict == o.verdict && residuals == o.residuals &&
           tolerances == o.tolerances && summary == o.summary && same_basis && notes == o.notes &&
           details == o.details;
  }
};

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "not_evaluable") return Verdict::not_evaluable;
  throw io::InputError("unknown verdict " + s);
}

inline json report_to_json(const Report& r) {
  json residuals = json::object();
  for (const auto& [k, v] : r.residuals) residuals[k] = io::format_number(v);
  json tolerances = json::object();
  for (const auto& [k, v] : r.tolerances) tolerances[k] = io::format_number(v);
  json out{{"command", r.command},   {"kind", r.kind},       {"verdict", to_string(r.verdict)},
           {"residuals", residuals}, {"tolerances", tolerances}, {"summary", r.summary},
           {"notes", r.notes},       {"details", r.details}};
  out["basis"] = r.basis ? io::to_json(*r.basis) : json(nullptr);
  return out;
}

inline Report report_from_json(const json& j) {
  Report r;
  r.command = j.at("command").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  for (const auto& [k, v] : j.at("residuals").items()) r.residuals[k] = std::stod(v.get<std::string>());
  for (const auto& [k, v] : j.at("tolerances").items()) r.tolerances[k] = std::stod(v.get<std::string>());
  r.summary = j.at("summary").get<std::map<std::string, std::string>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.details = j.at("details");
  if (!j.at("basis").is_null()) r.basis = io::matrix_from_json(j.at("basis"));
  return r;
}

inline void print_text(const Report& r, std::ostream& out) {
  out << r.command << ' ' << r.kind << ": " << to_string(r.verdict) << '\n';
  for (const auto& [k, v] : r.summary) out << "  " << k << ": " << v << '\n';
  for (const auto& [k, v] : r.residuals) out << "  residual " << k << " = " << io::format_number(v) << '\n';
  for (const auto& [k, v] : r.tolerances) out << "  tolerance " << k << " = " << io::format_number(v) << '\n';
  if (!r.details.empty()) out << "  details " << r.details.dump() << '\n';
  for (const auto& n : r.notes) out << "  note: " << n << '\n';
}

struct RunConfig {
  std::string command;
  std::string kind;
  std::string channel_path, state_path, parity_path, theta_path, chain_path, basis_path, out_path;
  std::vector<std::string> tol_overrides;
  std::string format = "text";
  std::uint64_t seed = 1;
  double weight = 0.5;
};

/// Applies "--tol x" (sets the check tolerances) or "--tol name=x".
inline ToleranceConfig tolerances_from(const std::vector<std::string>& overrides) {
  ToleranceConfig t;
  std::map<std::string, double*> named{
      {"herm_tol", &t.herm_tol},         {"psd_tol", &t.psd_tol},
      {"trace_tol", &t.trace_tol},       {"tp_tol", &t.tp_tol},
      {"cj_tol", &t.cj_tol},             {"eig_tol", &t.eig_tol},
      {"cluster_tol", &t.cluster_tol},   {"rank_tol", &t.rank_tol},
      {"projector_tol", &t.projector_tol}, {"etdb_tol", &t.etdb_tol},
      {"sqdb_tol", &t.sqdb_tol},         {"inv_tol", &t.inv_tol},
      {"dual_agreement_tol", &t.dual_agreement_tol}, {"classical_tol", &t.classical_tol},
      {"theta_state_tol", &t.theta_state_tol}, {"involution_tol", &t.involution_tol}};
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const std::string name = eq == std::string::npos ? "" : o.substr(0, eq);
    const std::string text = eq == std::string::npos ? o : o.substr(eq + 1);
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw io::InputError("--tol: cannot parse \"" + o + "\"");
    }
    if (!(value > 0)) throw io::InputError("--tol: tolerances must be positive");
    if (name.empty()) {
      t.etdb_tol = t.sqdb_tol = t.inv_tol = value;
    } else {
      const auto it = named.find(name);
      if (it == named.end()) throw io::InputError("--tol: unknown tolerance " + name);
      *it->second = value;
    }
  }
  return t;
}

namespace detail {

inline std::string need(const std::string& path, const char* flag) {
  if (path.empty()) throw io::InputError(std::string("missing required option ") + flag);
  return path;
}

struct Loaded {
  std::optional<Channel> channel;
  std::optional<DensityMatrix> rho;
  std::optional<CMatrix> basis;
};

inline Loaded load_channel_state(const RunConfig& cfg, const ToleranceConfig& tol) {
  Loaded l;
  l.channel = io::channel_from_json(io::read_file(need(cfg.channel_path, "--channel")), tol);
  l.rho = io::state_from_json(io::read_file(need(cfg.state_path, "--state")), tol);
  if (l.rho->dim() != l.channel->dim_in()) throw io::InputError("state and channel dimensions differ");
  if (!cfg.basis_path.empty()) {
    l.basis = io::basis_from_json(io::read_file(cfg.basis_path));
    if (l.basis->rows() != l.rho->dim() || l.basis->cols() != l.rho->dim()) {
      throw io::InputError("basis dimension differs from the state");
    }
  }
  return l;
}

inline std::map<std::string, double> check_tolerances(const ToleranceConfig& t) {
  return {{"etdb_tol", t.etdb_tol}, {"sqdb_tol", t.sqdb_tol}, {"inv_tol", t.inv_tol}};
}

inline json pair_label(const CVector& psi, Index dim_b) {
  for (Index x = 0; x < psi.size(); ++x) {
    if (std::abs(std::abs(psi(x)) - 1.0) <= 1e-9) return json::array({x / dim_b + 1, x % dim_b + 1});
  }
  return nullptr;
}

inline json items_json(const CJDecomposition& dec, const std::vector<std::optional<std::size_t>>& partner) {
  json items = json::array();
  for (std::size_t a = 0; a < dec.size(); ++a) {
    json it{{"p", io::format_number(dec[a].probability)}, {"psi", io::to_json(dec[a].psi)}};
    it["reversed_partner_index"] = partner[a] ? json(*partner[a]) : json(nullptr);
    it["label"] = pair_label(dec[a].psi, dec[a].dim_b);
    items.push_back(std::move(it));
  }
  return items;
}

}  // namespace detail

inline Report cmd_check(const RunConfig& cfg, const ToleranceConfig& tol) {
  Report r;
  r.command = "check";
  r.kind = cfg.kind;
  if (cfg.kind == "classical" || cfg.kind == "classical-p") {
    const io::ChainInput in = io::chain_from_json(io::read_file(detail::need(cfg.chain_path, "--chain")));
    Permutation pi = identity_permutation(in.chain.states_in());
    if (cfg.kind == "classical-p") {
      if (!in.pi) throw io::InputError("classical-p needs \"pi\" in the chain file");
      pi = *in.pi;
      if (!is_involution(pi)) throw io::InputError("\"pi\" is not an involution");
    }
    if (in.chain.states_in() != in.chain.states_out()) throw io::InputError("chain is not square");
    const ClassicalVerdict v = check_classical_db_parity(in.chain, pi, tol.classical_tol);
    r.verdict = verdict_of(v.pass);
    r.residuals["max_violation"] = v.max_violation;
    r.tolerances["classical_tol"] = tol.classical_tol;
    r.summary[cfg.kind] = to_string(r.verdict);
    if (!v.pass) r.details["worst_pair"] = json::array({v.worst.first + 1, v.worst.second + 1});
    return r;
  }

  const detail::Loaded l = detail::load_channel_state(cfg, tol);
  const Channel& ch = *l.channel;
  const DensityMatrix& rho = *l.rho;
  if (ch.dim_in() != ch.dim_out()) throw io::InputError("detailed balance checks need a square channel");
  const CMatrix basis = l.basis.value_or(rho.spectral().vectors);
  r.basis = basis;
  r.tolerances = detail::check_tolerances(tol);

  if (cfg.kind == "etdb" || cfg.kind == "sqdb") {
    const BalanceReport b = balance_report(ch, rho, basis, tol);
    r.residuals["invariance"] = b.invariance_residual;
    r.residuals["etdb"] = b.etdb_residual;
    if (b.sqdb_residual) r.residuals["sqdb"] = *b.sqdb_residual;
    r.summary = {{"invariance", to_string(b.invariance)}, {"etdb", to_string(b.etdb)}, {"sqdb", to_string(b.sqdb)}};
    r.notes = b.notes;
    r.verdict = cfg.kind == "etdb" ? b.etdb : b.sqdb;
    return r;
  }
  if (cfg.kind == "etdb-p") {
    const ParityOp p = io::parity_from_json(io::read_file(detail::need(cfg.parity_path, "--parity")), tol);
    if (p.matrix.rows() != rho.dim()) throw io::InputError("parity dimension differs from the state");
    const CheckResult res = check_etdb_p(ch, rho, p, basis, tol);
    r.residuals["etdb_p"] = res.residual;
    r.residuals["etdb"] = check_etdb(ch, rho, basis, tol).residual;
    r.verdict = verdict_of(res.pass);
    r.summary["etdb_p"] = to_string(r.verdict);
    r.notes = res.notes;
    return r;
  }
  if (cfg.kind == "sqdb-theta") {
    const ReversingOp th = io::reversing_from_json(io::read_file(detail::need(cfg.theta_path, "--theta")), tol);
    if (th.matrix.rows() != rho.dim()) throw io::InputError("reversing operation dimension differs from the state");
    r.tolerances["theta_state_tol"] = tol.theta_state_tol;
    try {
      const SqdbThetaResult res = check_sqdb_theta(ch, rho, th, tol);
      r.basis = res.basis;
      r.residuals["invariance"] = res.invariance.residual;
      r.residuals["kms_form"] = res.kms_residual;
      if (res.ac_residual) r.residuals["ac_form"] = *res.ac_residual;
      if (res.form_disagreement) r.residuals["form_disagreement"] = *res.form_disagreement;
      r.verdict = verdict_of(res.pass);
      r.summary = {{"invariance", to_string(verdict_of(res.invariance.pass))}, {"sqdb_theta", to_string(r.verdict)}};
      if (res.parity) r.details["factored_parity"] = io::parity_to_json(*res.parity);
      r.notes = res.notes;
    } catch (const ThetaStateMismatch& e) {
      r.verdict = Verdict::not_evaluable;
      r.summary["sqdb_theta"] = to_string(r.verdict);
      r.notes.emplace_back(e.what());
    } catch (const NonInvertibleSigma& e) {
      r.verdict = Verdict::not_evaluable;
      r.summary["sqdb_theta"] = to_string(r.verdict);
      r.notes.emplace_back(e.what());
    }
    return r;
  }
  throw io::InputError("unknown check kind " + cfg.kind);
}

inline Report cmd_decompose(const RunConfig& cfg, const ToleranceConfig& tol) {
  Report r;
  r.command = "decompose";
  r.kind = "cj";
  std::optional<Channel> ch;
  std::optional<DensityMatrix> rho;
  std::optional<CMatrix> basis;
  if (!cfg.chain_path.empty()) {
    const io::ChainInput in = io::chain_from_json(io::read_file(cfg.chain_path));
    ch = embed(in.chain, tol);
    rho.emplace(diagonal_state(in.chain.rho()), tol);
  } else {
    detail::Loaded l = detail::load_channel_state(cfg, tol);
    ch = std::move(l.channel);
    rho = std::move(l.rho);
    basis = std::move(l.basis);
  }
  const CMatrix b = basis.value_or(rho->spectral().vectors);
  r.basis = b;
  const RelativeChoi rc = cj_relative(*ch, *rho, b, tol);
  const CJDecomposition dec = decompose(rc, tol);
  r.residuals["reconstruction"] = (dec.reconstruct() - rc.kappa).norm();
  r.tolerances["cj_tol"] = tol.cj_tol;
  r.tolerances["projector_tol"] = tol.projector_tol;
  if (ch->dim_in() != ch->dim_out()) {
    r.verdict = Verdict::not_evaluable;
    r.details["items"] = detail::items_json(dec, std::vector<std::optional<std::size_t>>(dec.size()));
    r.notes.emplace_back("reverse transitions need a square system");
    return r;
  }
  const CompletenessVerdict c = is_complete(dec, tol);
  r.details["items"] = detail::items_json(dec, c.partner);
  r.details["complete"] = c.complete;
  r.details["witness"] = c.witness ? json(*c.witness) : json(nullptr);
  r.verdict = verdict_of(c.complete);
  r.summary["complete"] = c.complete ? "true" : "false";

  const CheckResult et = check_etdb(*ch, *rho, b, tol);
  r.residuals["etdb"] = et.residual;
  r.summary["etdb"] = to_string(verdict_of(et.pass));
  if (et.pass) {
    const EtdbDecomposition ed = etdb_decomposition(rc, tol);
    r.details["etdb_pairs"] = detail::items_json(ed.paired, ed.partner);
  }
  return r;
}

/// Writes the dual channel with a self-check block. Returns the exit code.
inline int cmd_dual(const RunConfig& cfg, const ToleranceConfig& tol, std::ostream& out) {
  const detail::Loaded l = detail::load_channel_state(cfg, tol);
  const Channel& ch = *l.channel;
  const DensityMatrix& rho = *l.rho;
  DualBases bases;
  bases.in = l.basis;
  Channel dual;
  CMatrix sigma = ch.apply(rho.matrix());
  CMatrix target = rho.matrix();
  if (cfg.kind == "prime") {
    dual = dual_channel(ch, rho, bases, tol);
  } else if (cfg.kind == "ac") {
    dual = ac_dual(ch, rho, bases, tol);
  } else if (cfg.kind == "kms") {
    dual = kms_dual(ch, rho, tol);
  } else if (cfg.kind == "parity") {
    const ParityOp p = io::parity_from_json(io::read_file(detail::need(cfg.parity_path, "--parity")), tol);
    if (ch.dim_in() != ch.dim_out() || p.matrix.rows() != ch.dim_in()) {
      throw io::InputError("parity dual needs a square channel and a parity of matching dimension");
    }
    dual = parity_dual(ch, rho, p, p, bases, tol);
    sigma = apply_parity(p, sigma);
    target = apply_parity(p, target);
  } else {
    throw io::InputError("unknown dual kind " + cfg.kind);
  }
  json doc = io::channel_to_json(dual);
  doc["self_check"] = {{"state_recovery_residual", io::format_number((dual.apply(sigma) - target).norm())},
                       {"trace_preserving", dual.trace_preserving()}};
  if (cfg.out_path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    io::write_file(cfg.out_path, doc);
    out << "wrote " << cfg.out_path << '\n';
  }
  return kExitPass;
}

inline std::pair<std::string, Index> split_example(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos) return {name, 0};
  try {
    return {name.substr(0, colon), static_cast<Index>(std::stol(name.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw io::InputError("bad dimension in " + name);
  }
}

/// Permutation k -> -k mod m, which reverses the cyclic shift.
inline ParityOp reflection_parity(Index m) {
  Permutation pi;
  for (Index k = 0; k < m; ++k) pi.push_back((m - k) % m);
  return permutation_parity(pi);
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const auto [name, m] = split_example(cfg.kind);
  const std::filesystem::path dir = cfg.out_path.empty() ? "." : cfg.out_path;
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  const auto put = [&](const std::string& file, const json& j) {
    io::write_file((dir / file).string(), j);
    written.push_back((dir / file).string());
  };
  const auto needs_dim = [&] {
    if (m < 2) throw io::InputError(name + " needs a dimension of at least 2, e.g. " + name + ":3");
  };
  if (name == "cycle3") {
    if (!(cfg.weight >= 0 && cfg.weight <= 1)) throw io::InputError("--weight must lie in [0, 1]");
    const CMatrix u = shift_clock(3).u;
    put("channel.json", io::channel_to_json(std::vector<CMatrix>{std::sqrt(cfg.weight) * u,
                                                                 std::sqrt(1.0 - cfg.weight) * u.adjoint()}));
    put("state.json", io::state_to_json(maximally_mixed(3)));
  } else if (name == "depolarizing2") {
    const Instance inst = depolarizing2();
    put("channel.json", io::channel_to_json(inst.channel.kraus()));
    put("state.json", io::state_to_json(inst.rho));
  } else if (name == "shift-clock") {
    needs_dim();
    const ShiftClock sc = shift_clock(m);
    put("channel.json", io::channel_to_json(std::vector<CMatrix>{sc.u}));
    put("state.json", io::state_to_json(maximally_mixed(m)));
    put("parity.json", io::parity_to_json(conjugation(m)));
    put("reflection_parity.json", io::parity_to_json(reflection_parity(m)));
    put("theta.json", io::reversing_to_json(ReversingOp{CMatrix::Identity(m, m), false}));
    const ParityOp refl = reflection_parity(m);
    put("reflection_theta.json", io::reversing_to_json(ReversingOp{refl.matrix.conjugate(), !refl.antiunitary}));
    put("operators.json", json{{"U", io::to_json(sc.u)}, {"V", io::to_json(sc.v)}, {"F", io::to_json(sc.f)}});
  } else if (name == "classical-db3") {
    const MarkovChain mc = classical_db3();
    put("chain.json", io::chain_to_json(mc));
    put("channel.json", io::channel_to_json(embed(mc)));
    put("state.json", io::state_to_json(DensityMatrix(diagonal_state(mc.rho()))));
  } else if (name == "random-etdb") {
    needs_dim();
    Rng rng(cfg.seed);
    const Instance inst = random_etdb(rng, m);
    put("channel.json", io::channel_to_json(inst.channel));
    put("state.json", io::state_to_json(inst.rho));
  } else if (name == "random-etdb-p") {
    needs_dim();
    Rng rng(cfg.seed);
    const ParityOp p = random_diagonal_parity(rng, m);
    const Instance inst = random_parity_balanced(rng, m, p);
    put("channel.json", io::channel_to_json(inst.channel));
    put("state.json", io::state_to_json(inst.rho));
    put("parity.json", io::parity_to_json(p));
    // theta with factor P: Theta = conj(P) with the linearity flipped
    put("theta.json", io::reversing_to_json(ReversingOp{p.matrix.conjugate(), !p.antiunitary}));
  } else {
    throw io::InputError("unknown example " + cfg.kind);
  }
  for (const auto& w : written) out << "wrote " << w << '\n';
  return kExitPass;
}

inline int cmd_embed(const RunConfig& cfg, std::ostream& out) {
  const io::ChainInput in = io::chain_from_json(io::read_file(detail::need(cfg.chain_path, "--chain")));
  json doc = io::channel_to_json(embed(in.chain));
  if (cfg.out_path.empty()) out << doc.dump(2) << '\n';
  else io::write_file(cfg.out_path, doc);
  return kExitPass;
}

inline int cmd_reverse(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const io::ChainInput in = io::chain_from_json(io::read_file(detail::need(cfg.chain_path, "--chain")));
  json doc;
  try {
    doc = io::chain_to_json(reverse_chain(in.chain), in.pi);
  } catch (const ZeroSigmaComponent& e) {
    err << "qdb: not evaluable: " << e.what() << '\n';
    return kExitNotEvaluable;
  }
  if (cfg.out_path.empty()) out << doc.dump(2) << '\n';
  else io::write_file(cfg.out_path, doc);
  return kExitPass;
}

inline int emit(const Report& r, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") out << report_to_json(r).dump(2) << '\n';
  else print_text(r, out);
  return exit_code(r.verdict);
}

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum detailed balance checks for finite-dimensional channels", "qdb"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--tol", cfg.tol_overrides, "check tolerance, or name=value for a specific one")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--seed", cfg.seed, "seed for random generators");
  app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--basis", cfg.basis_path, "JSON file with an eigenbasis of the state (columns)");

  const auto files = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--channel", cfg.channel_path, "channel JSON");
    sub->add_option("--state", cfg.state_path, "state JSON");
    sub->add_option("--parity", cfg.parity_path, "parity JSON");
    sub->add_option("--theta", cfg.theta_path, "reversing operation JSON");
    sub->add_option("--chain", cfg.chain_path, "Markov chain JSON");
    sub->add_option("--out", cfg.out_path, "output file or directory");
  };
  auto* check = app.add_subcommand("check", "run a detailed balance check");
  check->add_option("kind", cfg.kind)->required()->check(
      CLI::IsMember({"etdb", "sqdb", "etdb-p", "sqdb-theta", "classical", "classical-p"}));
  files(check);
  auto* dual = app.add_subcommand("dual", "compute a dual channel");
  dual->add_option("kind", cfg.kind)->required()->check(CLI::IsMember({"prime", "ac", "kms", "parity"}));
  files(dual);
  auto* decomp = app.add_subcommand("decompose", "list elementary transitions");
  files(decomp);
  auto* gen = app.add_subcommand("generate", "write an example instance");
  gen->add_option("example", cfg.kind)->required();
  gen->add_option("--weight", cfg.weight, "weight of the forward cycle in cycle3");
  files(gen);
  auto* emb = app.add_subcommand("embed", "classical chain to channel");
  files(emb);
  auto* rev = app.add_subcommand("reverse", "reverse a classical chain");
  files(rev);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "qdb: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    const ToleranceConfig tol = tolerances_from(cfg.tol_overrides);
    if (*check) return emit(cmd_check(cfg, tol), cfg, out);
    if (*decomp) return emit(cmd_decompose(cfg, tol), cfg, out);
    if (*dual) return cmd_dual(cfg, tol, out);
    if (*gen) return cmd_generate(cfg, out);
    if (*emb) return cmd_embed(cfg, out);
    if (*rev) return cmd_reverse(cfg, out, err);
  } catch (const io::InputError& e) {
    err << "qdb: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NonInvertibleSigma& e) {
    err << "qdb: not evaluable: " << e.what() << '\n';
    return kExitNotEvaluable;
  } catch (const NonInvertibleState& e) {
    err << "qdb: not evaluable: " << e.what() << '\n';
    return kExitNotEvaluable;
  } catch (const DimensionMismatch& e) {
    err << "qdb: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidBasis& e) {
    err << "qdb: " << e.what() << '\n';
    return kExitInputError;
  } catch (const io::json::exception& e) {
    err << "qdb: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace qdb::cli
