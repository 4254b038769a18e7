#include "bmc/autodiff.hpp"

namespace bmc::ad {

int Tape::record(int a, double da, int b, double db) {
  nodes_.push_back(Node{a, b, da, db});
  kinks_.push_back(0);
  return static_cast<int>(nodes_.size()) - 1;
}

std::vector<double> Tape::adjoints(const Var& output) const {
  std::vector<double> adj(nodes_.size(), 0.0);
  if (output.tape() != this) {
    return adj;
  }
  adj[static_cast<std::size_t>(output.index())] = 1.0;
  // Nodes are recorded in topological order; one reverse sweep suffices.
  for (std::size_t i = static_cast<std::size_t>(output.index()) + 1; i-- > 0;) {
    const double g = adj[i];
    if (g == 0.0) {
      continue;
    }
    const Node& n = nodes_[i];
    if (n.a >= 0) {
      adj[static_cast<std::size_t>(n.a)] += g * n.da;
    }
    if (n.b >= 0) {
      adj[static_cast<std::size_t>(n.b)] += g * n.db;
    }
  }
  return adj;
}

std::vector<char> Tape::kink_taint(const Var& output) const {
  std::vector<char> reach(nodes_.size(), 0);
  std::vector<char> taint(nodes_.size(), 0);
  if (output.tape() != this) {
    return taint;
  }
  reach[static_cast<std::size_t>(output.index())] = 1;
  for (std::size_t i = static_cast<std::size_t>(output.index()) + 1; i-- > 0;) {
    if (!reach[i]) {
      continue;
    }
    const bool tainted = taint[i] || kinks_[i];
    taint[i] = tainted ? 1 : 0;
    const Node& n = nodes_[i];
    for (int p : {n.a, n.b}) {
      if (p < 0) {
        continue;
      }
      reach[static_cast<std::size_t>(p)] = 1;
      if (tainted) {
        taint[static_cast<std::size_t>(p)] = 1;
      }
    }
  }
  return taint;
}

}  // namespace bmc::ad
