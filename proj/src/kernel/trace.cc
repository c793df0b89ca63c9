#include <set>

#include "dlive/kernel.h"

namespace dlive {

namespace {

struct Walker {
  std::string lines;
  std::vector<const Obligation*> obs;
  std::set<const ProofNode*> seen;

  // Shared subproofs are listed once, at their first occurrence.
  void node(const ProofPtr& n, size_t depth) {
    if (!seen.insert(n.get()).second) return;
    for (const auto& c : n->children()) node(c, depth + 1);
    for (const auto& ob : n->obligations()) {
      if (ob.proof) node(ob.proof, depth + 1);
    }
    for (const auto& ob : n->obligations()) obs.push_back(&ob);
    std::string verdict = verdict_text(n->verdict());
    if (n->refusal()) verdict = "RuleRefused(" + *n->refusal() + ")";
    lines += std::to_string(depth) + " " + n->name() + " " + verdict + " -- " +
             print_sequent(n->conclusion()) + "\n";
    for (const auto& note : n->notes()) lines += "  note: " + note + "\n";
  }
};

}  // namespace

std::string render_trace(const ProofPtr& root) {
  Walker w;
  w.node(root, 0);
  std::string out = w.lines;
  for (size_t i = 0; i < w.obs.size(); ++i) {
    const Obligation& ob = *w.obs[i];
    out += "ob " + std::to_string(i + 1) + " " + ob_kind_text(ob.kind) + " " +
           ob_status_text(ob.status, ob.kind) + " -- " + ob.text();
    if (!ob.detail.empty()) out += " [" + ob.detail + "]";
    out += "\n";
  }
  return out;
}

std::vector<const Obligation*> collect_obligations(const ProofPtr& root) {
  Walker w;
  w.node(root, 0);
  return w.obs;
}

}  // namespace dlive
