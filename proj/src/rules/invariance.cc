#include "internal.h"

namespace dlive::rules_detail {

const Binding* find(const CertStep& c, std::string_view key) { return c.find(key); }

std::optional<Polynomial> opt_poly(const CertStep& c, std::string_view key) {
  const Binding* b = c.find(key);
  if (!b) return std::nullopt;
  if (const auto* p = std::get_if<Polynomial>(&b->value)) return *p;
  throw KernelError("HintMismatch", c.rule + ": '" + std::string(key) + "' must be a polynomial");
}

Polynomial need_poly(const CertStep& c, std::string_view key) {
  auto p = opt_poly(c, key);
  if (!p) throw KernelError("MissingCertificateField", c.rule + " needs '" + std::string(key) + "'");
  return *p;
}

std::optional<Formula> opt_formula(const CertStep& c, std::string_view key) {
  const Binding* b = c.find(key);
  if (!b) return std::nullopt;
  if (const auto* f = std::get_if<Formula>(&b->value)) return *f;
  throw KernelError("HintMismatch", c.rule + ": '" + std::string(key) + "' must be a formula");
}

Formula need_formula(const CertStep& c, std::string_view key) {
  auto f = opt_formula(c, key);
  if (!f) throw KernelError("MissingCertificateField", c.rule + " needs '" + std::string(key) + "'");
  return *f;
}

std::vector<CertStep> hints_of(const CertStep& c, std::string_view key) {
  const Binding* b = c.find(key);
  if (!b) return {};
  if (const auto* h = std::get_if<Hint>(&b->value)) return h->steps;
  throw KernelError("HintMismatch", c.rule + ": '" + std::string(key) + "' must be a hint list");
}

CertStep make_step(std::string rule, std::vector<Binding> bindings) {
  CertStep s;
  s.rule = std::move(rule);
  s.bindings = std::move(bindings);
  return s;
}

Binding bind(std::string key, BindingValue value) {
  Binding b;
  b.key = std::move(key);
  b.value = std::move(value);
  return b;
}

bool better(Verdict a, Verdict b) { return a != b && worst(a, b) == b; }

namespace {

bool find_open(const ProofPtr& n, ProofPtr* parent, size_t* index) {
  for (size_t i = 0; i < n->children().size(); ++i) {
    const ProofPtr& c = n->children()[i];
    if (c->is_open()) {
      *parent = n;
      *index = i;
      return true;
    }
    if (find_open(c, parent, index)) return true;
  }
  return false;
}

ProofPtr diff_ind(Kernel& k, const Sequent& seq) {
  ProofPtr plain = k.diff_ind(seq, false);
  if (plain->verdict() == Verdict::Proved) return plain;
  const Formula& post = seq.succedent.left();
  if (post.kind() == Formula::Kind::Cmp && post.op() == CmpOp::Eq) return plain;
  ProofPtr strict = k.diff_ind(seq, true);
  if (!better(strict->verdict(), plain->verdict())) return plain;
  strict->add_note(std::string("dI attempt was ") + verdict_text(plain->verdict()));
  return strict;
}

ProofPtr fallback(Kernel& k, const Sequent& seq) {
  ProofPtr weak = k.diff_weaken(seq);
  if (weak->verdict() == Verdict::Proved) return weak;
  const Formula& post = seq.succedent.left();
  if (post.kind() != Formula::Kind::Cmp || post.op() == CmpOp::Ne) return weak;
  ProofPtr ind = diff_ind(k, seq);
  if (!better(ind->verdict(), weak->verdict())) return weak;
  ind->add_note(std::string("dW attempt was ") + verdict_text(weak->verdict()));
  return ind;
}

}  // namespace

void close_open(const ProofPtr& root, const ProofPtr& proof) {
  ProofPtr parent;
  size_t index = 0;
  if (!find_open(root, &parent, &index)) throw KernelError("ShapeMismatch", "no open goal left");
  parent->close(index, proof);
}

bool has_open(const ProofPtr& root) {
  ProofPtr parent;
  size_t index = 0;
  return root->is_open() || find_open(root, &parent, &index);
}

const Sequent& open_goal(const ProofPtr& root) {
  if (root->is_open()) return root->conclusion();
  ProofPtr parent;
  size_t index = 0;
  if (!find_open(root, &parent, &index)) throw KernelError("ShapeMismatch", "no open goal left");
  return parent->children()[index]->conclusion();
}

ProofPtr prove_invariance_with(Kernel& k, const Sequent& seq, std::span<const CertStep> hints,
                               const std::vector<ProofPtr>& known) {
  for (const auto& p : known) {
    if (p && p->conclusion() == seq) return p;
  }
  if (seq.succedent.kind() != Formula::Kind::Box) {
    throw KernelError("ShapeMismatch", "invariance needs a box succedent");
  }
  if (hints.empty()) return fallback(k, seq);

  const CertStep& h = hints.front();
  const auto rest = hints.subspan(1);
  auto terminal = [&] {
    if (!rest.empty()) throw KernelError("HintMismatch", "hints after terminal step " + h.rule);
  };
  auto then = [&](ProofPtr node, size_t child, std::span<const CertStep> more) {
    node->close(child, prove_invariance_with(k, node->children()[child]->conclusion(), more, known));
    return node;
  };

  if (h.rule == "DW") {
    terminal();
    return k.diff_weaken(seq);
  }
  if (h.rule == "DI") {
    terminal();
    if (auto c = opt_formula(h, "C"); c && *c != seq.succedent.left()) {
      throw KernelError("HintMismatch", "DI formula differs from the postcondition");
    }
    return diff_ind(k, seq);
  }
  if (h.rule == "BC") {
    terminal();
    return k.barrier(seq, need_poly(h, "p"));
  }
  if (h.rule == "DX") return then(k.diff_skip(seq), 0, rest);
  if (h.rule == "DomainWeaken") return then(k.domain_weaken(seq, need_formula(h, "R")), 0, rest);
  if (h.rule == "ClockDrop") return then(k.ghost_clock_drop(seq), 0, rest);
  if (h.rule == "DC") {
    const Formula c = need_formula(h, "C");
    const std::vector<CertStep> by = hints_of(h, "by");
    ProofPtr node = k.diff_cut(seq, c);
    node->close(0, prove_invariance_with(k, node->children()[0]->conclusion(), by, known));
    return then(node, 1, rest);
  }
  throw KernelError("HintMismatch", "'" + h.rule + "' is not an invariance step");
}

}  // namespace dlive::rules_detail

namespace dlive {

ProofPtr prove_invariance(Kernel& k, const Sequent& seq, const std::vector<CertStep>& hints) {
  return rules_detail::prove_invariance_with(k, seq, hints, {});
}

}  // namespace dlive
