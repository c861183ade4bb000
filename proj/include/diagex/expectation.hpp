#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "network.hpp"
#include "ubp.hpp"

namespace diagex {

inline constexpr size_t kExpansionBudget = 1'000'000;

// One pairing choice for one family: a uniform block permutation for a phase
// family, an even partition for a sign family.
struct Pairing {
  bool u_case = true;
  UBP ubp;
  EvenPartition part;
};

inline std::string print_pairing(const Pairing& p) {
  return p.u_case ? print_ubp(p.ubp) : print_partition(p.part);
}

struct ExpansionTerm {
  std::map<std::string, Pairing> assignment;
  Weight weight = 1;
  Network network;
};

struct PairingExpansion {
  std::vector<ExpansionTerm> terms;
};

inline Weight ubp_count(int n) {
  Weight total = 0;
  for_each_integer_partition(n, [&](const std::vector<int>& parts) {
    IntegerPartitionType t;
    t.n = n;
    t.mult.assign(static_cast<size_t>(n) + 1, 0);
    for (int p : parts) ++t.mult[static_cast<size_t>(p)];
    total += count_of_type(n, t, CountKind::ubp);
  });
  return total;
}

inline Weight even_partition_count(int two_n) {
  Weight total = 0;
  for_each_integer_partition(two_n, [&](const std::vector<int>& parts) {
    if (std::any_of(parts.begin(), parts.end(), [](int p) { return p % 2 != 0; })) return;
    IntegerPartitionType t;
    t.n = two_n;
    t.mult.assign(static_cast<size_t>(two_n) + 1, 0);
    for (int p : parts) ++t.mult[static_cast<size_t>(p)];
    total += count_of_type(two_n, t, CountKind::partition);
  });
  return total;
}

namespace detail {

struct FamilyBoxes {
  std::vector<int> u_nodes;     // phase boxes in node order
  std::vector<int> ubar_nodes;  // conjugate boxes in node order
  std::vector<int> s_nodes;     // sign boxes in node order
  bool found = false;
  bool is_s() const { return !s_nodes.empty(); }
};

inline FamilyBoxes family_boxes(const Network& net, const std::string& family) {
  FamilyBoxes fb;
  for (size_t v = 0; v < net.nodes.size(); ++v) {
    const auto& tag = net.nodes[v].tag;
    if (!tag || tag->family != family) continue;
    fb.found = true;
    switch (tag->flavor) {
      case Flavor::u: fb.u_nodes.push_back(static_cast<int>(v)); break;
      case Flavor::u_conjugate: fb.ubar_nodes.push_back(static_cast<int>(v)); break;
      case Flavor::s: fb.s_nodes.push_back(static_cast<int>(v)); break;
    }
  }
  if (!fb.found) throw std::invalid_argument("family not present in network: " + family);
  if (fb.is_s() && (!fb.u_nodes.empty() || !fb.ubar_nodes.empty()))
    throw std::invalid_argument("family mixes sign and phase flavors: " + family);
  return fb;
}

// Removes the family's boxes and inserts one delta per group. Each group is a
// list of box nodes whose single legs all meet the new delta, in slot order.
// Returns the rebuilt network and the node index of each inserted delta.
inline std::pair<Network, std::vector<int>> replace_boxes_with_junctions(
    const Network& net, const std::vector<std::vector<int>>& groups) {
  Network out;
  out.dimension = net.dimension;
  std::vector<int> node_map(net.nodes.size(), -1);
  std::vector<std::pair<int, int>> box_map(net.nodes.size(), {-1, -1});  // node -> (delta, slot)
  std::vector<char> removed(net.nodes.size(), 0);
  for (const auto& g : groups)
    for (int v : g) removed[static_cast<size_t>(v)] = 1;
  for (size_t v = 0; v < net.nodes.size(); ++v) {
    if (removed[v]) continue;
    const auto& nd = net.nodes[v];
    if (nd.tag)
      node_map[v] = out.add_random(nd.tag->family, nd.tag->flavor);
    else
      node_map[v] = out.add_tensor(net.tensors[static_cast<size_t>(nd.tensor)]);
  }
  std::vector<int> delta_nodes;
  for (const auto& g : groups) {
    const int dn = out.add_tensor(delta_tensor(static_cast<int>(g.size()), net.dimension));
    delta_nodes.push_back(dn);
    for (size_t s = 0; s < g.size(); ++s) box_map[static_cast<size_t>(g[s])] = {dn, static_cast<int>(s)};
  }
  auto remap = [&](const Leg& e) -> Leg {
    if (removed[static_cast<size_t>(e.node)]) {
      const auto [dn, slot] = box_map[static_cast<size_t>(e.node)];
      return Leg{dn, slot};
    }
    return Leg{node_map[static_cast<size_t>(e.node)], e.slot};
  };
  for (const auto& [a, b] : net.wires) out.wire(remap(a), remap(b));
  for (const auto& e : net.open) out.open.push_back(remap(e));
  return {std::move(out), std::move(delta_nodes)};
}

inline std::vector<std::vector<int>> groups_for_pairing(const FamilyBoxes& fb, const Pairing& p) {
  std::vector<std::vector<int>> groups;
  if (p.u_case) {
    const int n = static_cast<int>(fb.u_nodes.size());
    if (fb.is_s()) throw std::invalid_argument("phase pairing applied to a sign family");
    if (p.ubp.n() != n || static_cast<int>(fb.ubar_nodes.size()) != n)
      throw std::invalid_argument("pairing order does not match the family's box count");
    for (size_t k = 0; k < p.ubp.alpha.blocks.size(); ++k) {
      std::vector<int> g;
      for (int e : p.ubp.alpha.blocks[k]) g.push_back(fb.u_nodes[static_cast<size_t>(e - 1)]);
      for (int e : p.ubp.beta.blocks[static_cast<size_t>(p.ubp.f[k])])
        g.push_back(fb.ubar_nodes[static_cast<size_t>(e - 1)]);
      groups.push_back(std::move(g));
    }
  } else {
    if (!fb.is_s()) throw std::invalid_argument("sign pairing applied to a phase family");
    if (p.part.n != static_cast<int>(fb.s_nodes.size()))
      throw std::invalid_argument("pairing order does not match the family's box count");
    for (const auto& blk : p.part.blocks) {
      std::vector<int> g;
      for (int e : blk) g.push_back(fb.s_nodes[static_cast<size_t>(e - 1)]);
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

}  // namespace detail

// Boxes are numbered by node order within each flavor; pairings refer to that
// numbering. Other families' boxes stay in place.
inline Network build_paired(const Network& net, const std::string& family, const Pairing& p) {
  const auto fb = detail::family_boxes(net, family);
  auto groups = detail::groups_for_pairing(fb, p);
  return detail::replace_boxes_with_junctions(net, groups).first;
}

inline Network build_paired(const Network& net, const std::string& family, const UBP& x) {
  Pairing p;
  p.u_case = true;
  p.ubp = x;
  return build_paired(net, family, p);
}

inline Network build_paired(const Network& net, const std::string& family,
                            const EvenPartition& part) {
  Pairing p;
  p.u_case = false;
  p.part = part;
  return build_paired(net, family, p);
}

// E_u over one phase family: one term per uniform block permutation of the box
// count, weighted by Cf_U. Mismatched u / conjugate counts average to zero, so
// the expansion is empty.
inline PairingExpansion expand_u(const Network& net, const std::string& family) {
  const auto fb = detail::family_boxes(net, family);
  if (fb.is_s()) throw std::invalid_argument("expand_u: family is a sign family");
  PairingExpansion out;
  if (fb.u_nodes.size() != fb.ubar_nodes.size()) return out;
  const int n = static_cast<int>(fb.u_nodes.size());
  for_each_ubp(n, [&](const SetPartition& a, const SetPartition& b, const std::vector<int>& f) {
    ExpansionTerm term;
    Pairing p;
    p.u_case = true;
    p.ubp = UBP{a, b, f};
    term.weight = cf_u(p.ubp);
    term.network = build_paired(net, family, p);
    term.assignment.emplace(family, std::move(p));
    out.terms.push_back(std::move(term));
  });
  return out;
}

// E_s over one sign family: one term per even partition, weighted by Cf_Pi.
// Odd box counts average to zero.
inline PairingExpansion expand_s(const Network& net, const std::string& family) {
  const auto fb = detail::family_boxes(net, family);
  if (!fb.is_s()) throw std::invalid_argument("expand_s: family is a phase family");
  PairingExpansion out;
  const int m = static_cast<int>(fb.s_nodes.size());
  if (m % 2 != 0) return out;
  for_each_even_partition(m, [&](const EvenPartition& part) {
    ExpansionTerm term;
    Pairing p;
    p.u_case = false;
    p.part = part;
    term.weight = cf_pi(part);
    term.network = build_paired(net, family, p);
    term.assignment.emplace(family, std::move(p));
    out.terms.push_back(std::move(term));
  });
  return out;
}

// Restricted evaluation of one pairing: distinct groups must carry distinct
// index values. Zero whenever the group count exceeds the dimension.
inline Tensor eval_injective(const Network& net, const std::string& family, const Pairing& p) {
  const auto fb = detail::family_boxes(net, family);
  auto groups = detail::groups_for_pairing(fb, p);
  auto [paired, delta_nodes] = detail::replace_boxes_with_junctions(net, groups);
  std::vector<int> out_shape;
  for (const auto& e : paired.open) out_shape.push_back(paired.leg_dim(e));
  Tensor acc(out_shape);
  const int d = net.dimension;
  const int nblocks = static_cast<int>(delta_nodes.size());
  if (nblocks > d) return acc;
  // ordered injections of block labels into the index range
  std::vector<int> value(static_cast<size_t>(nblocks), -1);
  std::vector<char> taken(static_cast<size_t>(d), 0);
  auto rec = [&](auto&& self, int b) -> void {
    if (b == nblocks) {
      Network pinned = paired;
      for (int k = 0; k < nblocks; ++k) {
        auto& node = pinned.nodes[static_cast<size_t>(delta_nodes[static_cast<size_t>(k)])];
        auto& t = pinned.tensors[static_cast<size_t>(node.tensor)];
        Tensor pin(t.shape);
        pin.at(std::vector<int>(t.shape.size(), value[static_cast<size_t>(k)])) = 1.0;
        t = std::move(pin);
      }
      const Tensor val = contract(pinned);
      for (size_t i = 0; i < acc.size(); ++i) acc.data[i] += val.data[i];
      return;
    }
    for (int v = 0; v < d; ++v) {
      if (taken[static_cast<size_t>(v)]) continue;
      taken[static_cast<size_t>(v)] = 1;
      value[static_cast<size_t>(b)] = v;
      self(self, b + 1);
      taken[static_cast<size_t>(v)] = 0;
    }
  };
  rec(rec, 0);
  return acc;
}

inline Tensor eval_injective(const Network& net, const std::string& family, const UBP& x) {
  Pairing p;
  p.u_case = true;
  p.ubp = x;
  return eval_injective(net, family, p);
}

inline Tensor eval_injective(const Network& net, const std::string& family,
                             const EvenPartition& part) {
  Pairing p;
  p.u_case = false;
  p.part = part;
  return eval_injective(net, family, p);
}

namespace detail {

struct FamilyPlan {
  std::string name;
  bool is_s = false;
  int order = 0;  // box count for s, shared u count for phase
  bool zero = false;
};

inline std::vector<FamilyPlan> family_plans(const Network& net) {
  std::vector<FamilyPlan> plans;
  for (const auto& nd : net.nodes) {
    if (!nd.tag) continue;
    bool seen = false;
    for (const auto& p : plans) seen = seen || p.name == nd.tag->family;
    if (seen) continue;
    const auto fb = family_boxes(net, nd.tag->family);
    FamilyPlan plan;
    plan.name = nd.tag->family;
    plan.is_s = fb.is_s();
    if (plan.is_s) {
      plan.order = static_cast<int>(fb.s_nodes.size());
      plan.zero = plan.order % 2 != 0;
    } else {
      plan.order = static_cast<int>(fb.u_nodes.size());
      plan.zero = fb.u_nodes.size() != fb.ubar_nodes.size();
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace detail

// Full expectation: expands every family in node order (Cartesian product of
// the per-family pairings, weights multiplied), contracts each fully paired
// network, and accumulates in a fixed order.
inline Tensor expect(const Network& net, size_t budget = kExpansionBudget) {
  validate(net);
  std::vector<int> out_shape;
  for (const auto& e : net.open) out_shape.push_back(net.leg_dim(e));
  Tensor acc(out_shape);

  const auto plans = detail::family_plans(net);
  for (const auto& p : plans)
    if (p.zero) return acc;

  Weight total_terms = 1;
  std::string sizes;
  for (const auto& p : plans) {
    total_terms *= p.is_s ? even_partition_count(p.order) : ubp_count(p.order);
    if (!sizes.empty()) sizes += ", ";
    sizes += p.name + ":" + std::to_string(p.order);
  }
  if (total_terms > Weight(budget))
    throw resource_error("expansion budget exceeded for family sizes [" + sizes + "]");

  auto rec = [&](auto&& self, const Network& cur, size_t k, const Weight& w) -> void {
    if (k == plans.size()) {
      const double wd = w.convert_to<double>();
      const Tensor val = contract(cur);
      for (size_t i = 0; i < acc.size(); ++i) acc.data[i] += wd * val.data[i];
      return;
    }
    const auto& plan = plans[k];
    if (plan.is_s) {
      for_each_even_partition(plan.order, [&](const EvenPartition& part) {
        self(self, build_paired(cur, plan.name, part), k + 1, w * cf_pi(part));
      });
    } else {
      for_each_ubp(plan.order,
                   [&](const SetPartition& a, const SetPartition& b, const std::vector<int>& f) {
                     const UBP x{a, b, f};
                     self(self, build_paired(cur, plan.name, x), k + 1, w * cf_u(x));
                   });
    }
  };
  rec(rec, net, 0, Weight(1));
  return acc;
}

// (pairing text, weight) pairs in canonical text order, for diffing against
// hand computations.
inline std::vector<std::pair<std::string, Weight>> symbolic_terms(const PairingExpansion& ex) {
  std::vector<std::pair<std::string, Weight>> out;
  for (const auto& term : ex.terms) {
    std::string text;
    for (const auto& [fam, pairing] : term.assignment) {
      if (!text.empty()) text += ";";
      text += print_pairing(pairing);
    }
    out.emplace_back(std::move(text), term.weight);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace diagex
