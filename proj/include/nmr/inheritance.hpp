#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "nmr/dyadic.hpp"
#include "nmr/errors.hpp"

namespace nmr {

inline constexpr int kMaxDiagramNodes = 32;
inline constexpr std::size_t kMaxCells = std::size_t(1) << 20;

struct Arrow {
  int from = -1;
  int to = -1;
  bool positive = true;
};

/// Directed acyclic diagram of positive ("->", mostly-in) and negative
/// ("-/>", mostly-outside) arrows between named nodes. The union of both
/// arrow kinds must be acyclic and a node pair carries at most one arrow
/// per direction.
class InheritanceDiagram {
 public:
  static InheritanceDiagram build(std::vector<std::string> nodes, std::vector<Arrow> arrows) {
    if (nodes.size() > kMaxDiagramNodes)
      throw Error(ErrorCode::CapacityExceeded,
                  "at most " + std::to_string(kMaxDiagramNodes) + " nodes supported");
    InheritanceDiagram d;
    d.nodes_ = std::move(nodes);
    for (std::size_t i = 0; i < d.nodes_.size(); ++i)
      for (std::size_t j = i + 1; j < d.nodes_.size(); ++j)
        if (d.nodes_[i] == d.nodes_[j])
          throw Error(ErrorCode::DuplicateName, "node '" + d.nodes_[i] + "' declared twice");
    for (const Arrow& a : arrows) {
      if (a.from < 0 || a.from >= d.n() || a.to < 0 || a.to >= d.n())
        throw Error(ErrorCode::UnknownNode, "arrow endpoint out of range");
      for (const Arrow& b : d.arrows_)
        if (b.from == a.from && b.to == a.to) {
          if (b.positive != a.positive)
            throw Error(ErrorCode::ConflictingParallelArrows,
                        "both arrow kinds between '" + d.nodes_[a.from] + "' and '" +
                            d.nodes_[a.to] + "'");
          goto next_arrow;  // exact duplicate, keep the first
        }
      d.arrows_.push_back(a);
    next_arrow:;
    }
    d.check_acyclic();
    return d;
  }

  int n() const { return static_cast<int>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i] == name) return static_cast<int>(i);
    return -1;
  }
  int node(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw Error(ErrorCode::UnknownNode, "unknown node '" + name + "'");
    return i;
  }

  std::string format_arrow(const Arrow& a) const {
    return nodes_[a.from] + (a.positive ? " -> " : " -/> ") + nodes_[a.to];
  }

  /// masks of nodes reachable along positive arrows in one or more steps
  std::vector<std::uint64_t> positive_closure() const {
    std::vector<std::uint64_t> step(n(), 0);
    for (const Arrow& a : arrows_)
      if (a.positive) step[a.from] |= std::uint64_t(1) << a.to;
    std::vector<std::uint64_t> closure = step;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int u = 0; u < n(); ++u)
        for (int v = 0; v < n(); ++v)
          if ((closure[u] >> v) & 1)
            if (std::uint64_t add = closure[v] & ~closure[u]; add) {
              closure[u] |= add;
              changed = true;
            }
    }
    return closure;
  }

 private:
  void check_acyclic() const {
    std::vector<int> indeg(n(), 0);
    for (const Arrow& a : arrows_) {
      if (a.from == a.to)
        throw Error(ErrorCode::CycleDetected, "arrow from '" + nodes_[a.from] + "' to itself");
      ++indeg[a.to];
    }
    std::vector<int> order;
    for (int i = 0; i < n(); ++i)
      if (indeg[i] == 0) order.push_back(i);
    for (std::size_t k = 0; k < order.size(); ++k)
      for (const Arrow& a : arrows_)
        if (a.from == order[k])
          if (--indeg[a.to] == 0) order.push_back(a.to);
    if (static_cast<int>(order.size()) == n()) return;
    std::string members;
    for (int i = 0; i < n(); ++i)
      if (indeg[i] > 0) members += (members.empty() ? "" : ", ") + nodes_[i];
    throw Error(ErrorCode::CycleDetected, "arrow cycle through: " + members);
  }

  std::vector<std::string> nodes_;
  std::vector<Arrow> arrows_;
};

/// Text format, one item per line, '#' comments:
///   nodes A B C
///   A -> B
///   A -/> C
inline InheritanceDiagram parse_diagram(const std::string& text) {
  std::vector<std::string> nodes;
  std::vector<Arrow> arrows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto lookup = [&](const std::string& name, int ln) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == name) return static_cast<int>(i);
    throw Error(ErrorCode::UnknownName,
                "line " + std::to_string(ln) + ": unknown node '" + name + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    if (tok[0] == "nodes") {
      if (tok.size() < 2) throw Error(ErrorCode::SyntaxError, where() + "'nodes' needs names");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (std::find(nodes.begin(), nodes.end(), tok[i]) != nodes.end())
          throw Error(ErrorCode::DuplicateName, where() + "node '" + tok[i] + "' declared twice");
        nodes.push_back(tok[i]);
      }
    } else if (tok.size() == 3 && (tok[1] == "->" || tok[1] == "-/>")) {
      arrows.push_back({lookup(tok[0], lineno), lookup(tok[2], lineno), tok[1] == "->"});
    } else {
      throw Error(ErrorCode::SyntaxError,
                  where() + "expected 'nodes ...' or 'X -> Y' or 'X -/> Y'");
    }
  }
  return InheritanceDiagram::build(std::move(nodes), std::move(arrows));
}

/// One instance of the specificity pattern: `more_specific` reaches
/// `less_specific` along a positive path while the two carry opposite
/// arrows to `conflict`. `direct` marks a single-arrow path; longer paths
/// are derived by chaining.
struct SpecificityInstance {
  int more_specific;
  int less_specific;
  int conflict;
  bool direct;

  bool operator==(const SpecificityInstance&) const = default;
};

/// All instantiations of the specificity pattern in the diagram. Uses its
/// own depth-first path search, independent of the inference engine's
/// closure, so the two can be checked against each other.
inline std::vector<SpecificityInstance> derive_specificity(const InheritanceDiagram& d) {
  auto has_pos_path = [&](int from, int to) {
    std::vector<int> stack{from};
    std::vector<bool> seen(d.n(), false);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const Arrow& a : d.arrows())
        if (a.positive && a.from == u && !seen[a.to]) {
          if (a.to == to) return true;
          seen[a.to] = true;
          stack.push_back(a.to);
        }
    }
    return false;
  };
  auto arrow_between = [&](int from, int to) -> const Arrow* {
    for (const Arrow& a : d.arrows())
      if (a.from == from && a.to == to) return &a;
    return nullptr;
  };
  std::vector<SpecificityInstance> out;
  for (int c = 0; c < d.n(); ++c)
    for (int b = 0; b < d.n(); ++b) {
      if (b == c || !has_pos_path(c, b)) continue;
      const Arrow* direct = arrow_between(c, b);
      for (int a = 0; a < d.n(); ++a) {
        const Arrow* ba = arrow_between(b, a);
        const Arrow* ca = arrow_between(c, a);
        if (ba && ca && ba->positive != ca->positive)
          out.push_back({c, b, a, direct != nullptr && direct->positive});
      }
    }
  std::sort(out.begin(), out.end(), [](const SpecificityInstance& x, const SpecificityInstance& y) {
    return std::tie(x.more_specific, x.less_specific, x.conflict) <
           std::tie(y.more_specific, y.less_specific, y.conflict);
  });
  return out;
}

enum class Membership { Unknown, In, Out };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::In:      return "IN";
    case Membership::Out:     return "OUT";
    case Membership::Unknown: return "UNKNOWN";
  }
  return "?";
}

enum class TargetStatus { InBig, OutBig, Split, None, Mixed };

inline const char* to_string(TargetStatus s) {
  switch (s) {
    case TargetStatus::InBig:  return "IN_BIG";
    case TargetStatus::OutBig: return "OUT_BIG";
    case TargetStatus::Split:  return "SPLIT";
    case TargetStatus::None:   return "NONE";
    case TargetStatus::Mixed:  return "MIXED";
  }
  return "?";
}

/// One maximal consistent picture of the diagram below the source. Each
/// unresolved conflict on the way halved the fraction; the fractions of
/// all cells of one inference sum to 1.
struct Cell {
  int splits = 0;          // fraction is 2^-splits
  std::string path;        // "" for the root, then 'I'/'O' per split
  std::vector<Membership> membership;
  std::vector<bool> by_split;  // membership decided by a split, not by arrows

  Dyadic fraction() const { return Dyadic::pow2(splits); }
};

struct Preemption {
  Arrow dropped;
  Arrow by;
};

struct TraceEvent {
  std::string cell;  // cell path at processing time, "*" prefixed
  int target;
  std::vector<Arrow> applied;    // surviving arrows
  std::vector<Preemption> preempted;
  char outcome;  // 'I', 'O', 'U' or 'S'
};

struct TargetReport {
  int node;
  TargetStatus status;
  Dyadic in, out, unknown;
};

struct InferenceResult {
  int source;
  std::vector<TargetReport> targets;  // one per diagram node, declaration order
  std::vector<Cell> cells;            // canonical order
  std::vector<TraceEvent> trace;      // processing order
  std::vector<int> order;             // topological processing order used
};

struct InferOptions {
  /// tie-break priority per node for the topological order (testing hook;
  /// the result is identical for every valid order)
  std::vector<int> priority;
  /// whether the IN half of a split propagates that node's own outgoing
  /// arrows (OUT halves never do)
  bool split_cells_propagate = true;
};

/// Downward inference from a source node. Per cell and target: collect the
/// direct arrows whose tail is IN, drop every arrow whose tail is reached
/// from the tail of an applicable opposite arrow along a positive path
/// (specificity preemption), then let the survivors decide IN/OUT, split
/// the cell in two when they disagree, or leave the target UNKNOWN when
/// nothing applies. Negative and unknown tails never transmit arrows.
inline InferenceResult infer(const InheritanceDiagram& d, int source,
                             const InferOptions& opts = {}) {
  if (source < 0 || source >= d.n()) throw Error(ErrorCode::UnknownNode, "source out of range");
  const auto closure = d.positive_closure();

  // nodes reachable from the source along arrows of either kind
  std::vector<bool> reachable(d.n(), false);
  reachable[source] = true;
  std::vector<int> work{source};
  while (!work.empty()) {
    int u = work.back();
    work.pop_back();
    for (const Arrow& a : d.arrows())
      if (a.from == u && !reachable[a.to]) {
        reachable[a.to] = true;
        work.push_back(a.to);
      }
  }

  // topological order of the reachable subgraph; the source is its only
  // root, so it comes first
  std::vector<int> indeg(d.n(), 0);
  for (const Arrow& a : d.arrows())
    if (reachable[a.from] && reachable[a.to]) ++indeg[a.to];
  auto priority = [&](int i) {
    return i < static_cast<int>(opts.priority.size()) ? opts.priority[i] : i;
  };
  std::vector<int> ready, order;
  for (int i = 0; i < d.n(); ++i)
    if (reachable[i] && indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    auto best = std::min_element(ready.begin(), ready.end(),
                                 [&](int a, int b) { return priority(a) < priority(b); });
    int u = *best;
    ready.erase(best);
    order.push_back(u);
    for (const Arrow& a : d.arrows())
      if (a.from == u && reachable[a.to])
        if (--indeg[a.to] == 0) ready.push_back(a.to);
  }

  InferenceResult res;
  res.source = source;
  res.order = order;

  Cell root;
  root.membership.assign(d.n(), Membership::Unknown);
  root.by_split.assign(d.n(), false);
  root.membership[source] = Membership::In;
  std::vector<Cell> cells{root};

  for (int t : order) {
    if (t == source) continue;
    std::vector<Cell> next;
    next.reserve(cells.size());
    for (Cell& cell : cells) {
      // applicable arrows: tail IN (and, if the knob is off, not IN by split)
      std::vector<const Arrow*> applicable;
      for (const Arrow& a : d.arrows())
        if (a.to == t && cell.membership[a.from] == Membership::In &&
            (opts.split_cells_propagate || !cell.by_split[a.from]))
          applicable.push_back(&a);
      TraceEvent ev{"*" + cell.path, t, {}, {}, 'U'};
      bool in = false, out = false;
      for (const Arrow* a1 : applicable) {
        const Arrow* by = nullptr;
        for (const Arrow* a2 : applicable)
          if (a2->positive != a1->positive && ((closure[a2->from] >> a1->from) & 1)) {
            by = a2;
            break;
          }
        if (by) {
          ev.preempted.push_back({*a1, *by});
        } else {
          ev.applied.push_back(*a1);
          (a1->positive ? in : out) = true;
        }
      }
      if (in && out) {
        ev.outcome = 'S';
        Cell half_in = cell, half_out = cell;
        ++half_in.splits;
        ++half_out.splits;
        half_in.path += 'I';
        half_out.path += 'O';
        half_in.membership[t] = Membership::In;
        half_out.membership[t] = Membership::Out;
        half_in.by_split[t] = half_out.by_split[t] = true;
        next.push_back(std::move(half_in));
        next.push_back(std::move(half_out));
      } else {
        if (in) {
          ev.outcome = 'I';
          cell.membership[t] = Membership::In;
        } else if (out) {
          ev.outcome = 'O';
          cell.membership[t] = Membership::Out;
        }
        next.push_back(std::move(cell));
      }
      res.trace.push_back(std::move(ev));
    }
    cells = std::move(next);
    if (cells.size() > kMaxCells)
      throw Error(ErrorCode::CapacityExceeded, "cell decomposition too large");
  }

  // aggregate per node
  for (int i = 0; i < d.n(); ++i) {
    TargetReport r{i, TargetStatus::None, Dyadic::zero(), Dyadic::zero(), Dyadic::zero()};
    for (const Cell& c : cells) {
      Dyadic f = c.fraction();
      switch (c.membership[i]) {
        case Membership::In:      r.in = r.in + f; break;
        case Membership::Out:     r.out = r.out + f; break;
        case Membership::Unknown: r.unknown = r.unknown + f; break;
      }
    }
    if (r.in.is_one())
      r.status = TargetStatus::InBig;
    else if (r.out.is_one())
      r.status = TargetStatus::OutBig;
    else if (r.unknown.is_one())
      r.status = TargetStatus::None;
    else if (r.unknown.is_zero())
      r.status = TargetStatus::Split;
    else
      r.status = TargetStatus::Mixed;
    res.targets.push_back(r);
  }

  // canonical cell order: IN before OUT before UNKNOWN, node by node
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    for (std::size_t i = 0; i < a.membership.size(); ++i)
      if (a.membership[i] != b.membership[i]) {
        auto key = [](Membership m) { return m == Membership::In ? 0 : m == Membership::Out ? 1 : 2; };
        return key(a.membership[i]) < key(b.membership[i]);
      }
    return false;
  });
  res.cells = std::move(cells);
  return res;
}

/// Human-readable derivation for one target, replayed from a fresh
/// inference (deterministic, so the replay is faithful).
inline std::vector<std::string> explain(const InheritanceDiagram& d, int source, int target,
                                        const InferOptions& opts = {}) {
  if (target < 0 || target >= d.n()) throw Error(ErrorCode::UnknownNode, "target out of range");
  InferenceResult res = infer(d, source, opts);
  std::vector<std::string> lines;
  if (target == source) {
    lines.push_back(d.nodes()[source] + ": source, IN by definition");
    return lines;
  }
  for (const TraceEvent& ev : res.trace) {
    if (ev.target != target) continue;
    std::string line = "[cell " + ev.cell + "] " + d.nodes()[target] + ":";
    for (const Preemption& p : ev.preempted)
      line += " preempt " + d.format_arrow(p.dropped) + " (" + d.format_arrow(p.by) +
              " applies and " + d.nodes()[p.by.from] + " is below " + d.nodes()[p.dropped.from] +
              " along positive arrows);";
    if (!ev.applied.empty()) {
      line += " apply";
      for (std::size_t i = 0; i < ev.applied.size(); ++i)
        line += (i ? ", " : " ") + d.format_arrow(ev.applied[i]);
      line += ";";
    }
    switch (ev.outcome) {
      case 'I': line += " => IN"; break;
      case 'O': line += " => OUT"; break;
      case 'S': line += " => conflict, split 1/2 - 1/2"; break;
      default:  line += " no applicable arrows => UNKNOWN"; break;
    }
    lines.push_back(line);
  }
  const TargetReport& r = res.targets[target];
  lines.push_back(d.nodes()[target] + ": " + to_string(r.status) + " (in " + r.in.str() +
                  ", out " + r.out.str() + ", unknown " + r.unknown.str() + ")");
  return lines;
}

}  // namespace nmr
