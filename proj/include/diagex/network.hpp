#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tensor.hpp"

namespace diagex {

enum class Flavor { u, u_conjugate, s };

// A family names one random vector; all boxes of the family expose one leg of
// the network dimension. Complex families use flavors u / u_conjugate, real
// families use s.
struct RandomTag {
  std::string family;
  Flavor flavor = Flavor::u;
  bool operator==(const RandomTag&) const = default;
};

struct Leg {
  int node = -1;
  int slot = -1;
  bool operator==(const Leg&) const = default;
  bool operator<(const Leg& o) const { return std::pair(node, slot) < std::pair(o.node, o.slot); }
};

struct Network {
  struct Node {
    int tensor = -1;  // index into tensors, or -1 for a random box
    std::optional<RandomTag> tag;
  };

  int dimension = 0;  // leg dimension of every random box
  std::vector<Tensor> tensors;
  std::vector<Node> nodes;
  std::vector<std::pair<Leg, Leg>> wires;
  std::vector<Leg> open;

  int node_arity(int v) const {
    const auto& nd = nodes[static_cast<size_t>(v)];
    return nd.tag ? 1 : tensors[static_cast<size_t>(nd.tensor)].rank();
  }
  int leg_dim(const Leg& e) const {
    const auto& nd = nodes[static_cast<size_t>(e.node)];
    return nd.tag ? dimension : tensors[static_cast<size_t>(nd.tensor)].shape[static_cast<size_t>(e.slot)];
  }
  bool has_random() const {
    for (const auto& nd : nodes)
      if (nd.tag) return true;
    return false;
  }

  int add_tensor(Tensor t) {
    tensors.push_back(std::move(t));
    nodes.push_back(Node{static_cast<int>(tensors.size()) - 1, std::nullopt});
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_random(const std::string& family, Flavor flavor) {
    nodes.push_back(Node{-1, RandomTag{family, flavor}});
    return static_cast<int>(nodes.size()) - 1;
  }
  void wire(Leg a, Leg b) { wires.emplace_back(a, b); }
  void wire(int na, int sa, int nb, int sb) { wires.emplace_back(Leg{na, sa}, Leg{nb, sb}); }
};

namespace detail {

inline void check_leg(const Network& net, const Leg& e) {
  if (e.node < 0 || static_cast<size_t>(e.node) >= net.nodes.size())
    throw std::invalid_argument("network: leg references a missing node");
  if (e.slot < 0 || e.slot >= net.node_arity(e.node))
    throw std::invalid_argument("network: leg references a missing slot");
}

}  // namespace detail

// Checks the structural invariants: every endpoint is used exactly once
// across wires and the open list, wires join equal dimensions, random boxes
// carry one leg of the shared dimension and consistent family flavors.
inline void validate(const Network& net) {
  size_t total = 0;
  for (size_t v = 0; v < net.nodes.size(); ++v) {
    const auto& nd = net.nodes[v];
    if (nd.tag) {
      if (net.dimension < 1)
        throw std::invalid_argument("network: random boxes need a positive dimension");
      if (nd.tensor != -1) throw std::invalid_argument("network: node is both tensor and random");
    } else {
      if (nd.tensor < 0 || static_cast<size_t>(nd.tensor) >= net.tensors.size())
        throw std::invalid_argument("network: node references a missing tensor");
    }
    total += static_cast<size_t>(net.node_arity(static_cast<int>(v)));
  }
  std::vector<std::vector<char>> used(net.nodes.size());
  for (size_t v = 0; v < net.nodes.size(); ++v)
    used[v].assign(static_cast<size_t>(net.node_arity(static_cast<int>(v))), 0);
  auto mark = [&](const Leg& e) {
    detail::check_leg(net, e);
    auto& u = used[static_cast<size_t>(e.node)][static_cast<size_t>(e.slot)];
    if (u) throw std::invalid_argument("network: leg endpoint used twice");
    u = 1;
  };
  for (const auto& [a, b] : net.wires) {
    mark(a);
    mark(b);
    if (net.leg_dim(a) != net.leg_dim(b))
      throw std::invalid_argument("network: wire joins unequal dimensions");
  }
  for (const auto& e : net.open) mark(e);
  size_t marked = 2 * net.wires.size() + net.open.size();
  if (marked != total)
    throw std::invalid_argument("network: every leg must be wired or listed open");
  // family flavor discipline
  std::vector<std::pair<std::string, bool>> families;  // family -> uses s
  for (const auto& nd : net.nodes) {
    if (!nd.tag) continue;
    const bool is_s = nd.tag->flavor == Flavor::s;
    bool found = false;
    for (auto& [name, s] : families)
      if (name == nd.tag->family) {
        found = true;
        if (s != is_s)
          throw std::invalid_argument("network: family mixes sign and phase flavors");
      }
    if (!found) families.emplace_back(nd.tag->family, is_s);
  }
}

// Appends every unwired endpoint, in node-then-slot order, to the open list.
inline void auto_open(Network& net) {
  std::vector<std::vector<char>> used(net.nodes.size());
  for (size_t v = 0; v < net.nodes.size(); ++v)
    used[v].assign(static_cast<size_t>(net.node_arity(static_cast<int>(v))), 0);
  auto mark = [&](const Leg& e) {
    detail::check_leg(net, e);
    used[static_cast<size_t>(e.node)][static_cast<size_t>(e.slot)] = 1;
  };
  for (const auto& [a, b] : net.wires) {
    mark(a);
    mark(b);
  }
  for (const auto& e : net.open) mark(e);
  for (size_t v = 0; v < net.nodes.size(); ++v)
    for (size_t s = 0; s < used[v].size(); ++s)
      if (!used[v][s]) net.open.push_back(Leg{static_cast<int>(v), static_cast<int>(s)});
}

namespace detail {

struct Piece {
  Tensor t;
  std::vector<int> ids;
};

// Sums out axes that carry the same id twice (wires with both ends on one
// node).
inline void self_trace(Piece& p) {
  while (true) {
    int a1 = -1, a2 = -1;
    for (size_t i = 0; i < p.ids.size() && a1 < 0; ++i)
      for (size_t j = i + 1; j < p.ids.size(); ++j)
        if (p.ids[i] == p.ids[j]) {
          a1 = static_cast<int>(i);
          a2 = static_cast<int>(j);
          break;
        }
    if (a1 < 0) return;
    const int d = p.t.shape[static_cast<size_t>(a1)];
    std::vector<int> out_shape;
    std::vector<int> out_ids;
    for (size_t i = 0; i < p.ids.size(); ++i)
      if (static_cast<int>(i) != a1 && static_cast<int>(i) != a2) {
        out_shape.push_back(p.t.shape[i]);
        out_ids.push_back(p.ids[i]);
      }
    Tensor out(out_shape);
    std::vector<int> src(p.ids.size());
    for_each_index(out_shape, [&](const std::vector<int>& idx) {
      size_t w = 0;
      for (size_t i = 0; i < p.ids.size(); ++i)
        if (static_cast<int>(i) != a1 && static_cast<int>(i) != a2) src[i] = idx[w++];
      cplx s = 0;
      for (int v = 0; v < d; ++v) {
        src[static_cast<size_t>(a1)] = v;
        src[static_cast<size_t>(a2)] = v;
        s += p.t.at(src);
      }
      out.at(idx) = s;
    });
    p.t = std::move(out);
    p.ids = std::move(out_ids);
  }
}

// Contracts over all shared ids via permute + matrix multiply.
inline Piece contract_pair(const Piece& a, const Piece& b) {
  std::vector<int> shared;
  for (int id : a.ids)
    for (int jd : b.ids)
      if (id == jd) shared.push_back(id);
  std::vector<int> a_perm, b_perm, out_ids, out_shape;
  size_t free_a = 1, free_b = 1, sh = 1;
  for (size_t i = 0; i < a.ids.size(); ++i)
    if (std::find(shared.begin(), shared.end(), a.ids[i]) == shared.end()) {
      a_perm.push_back(static_cast<int>(i));
      out_ids.push_back(a.ids[i]);
      out_shape.push_back(a.t.shape[i]);
      free_a *= static_cast<size_t>(a.t.shape[i]);
    }
  for (int id : shared) {
    const size_t ia = static_cast<size_t>(std::find(a.ids.begin(), a.ids.end(), id) - a.ids.begin());
    a_perm.push_back(static_cast<int>(ia));
    sh *= static_cast<size_t>(a.t.shape[ia]);
  }
  for (int id : shared)
    b_perm.push_back(static_cast<int>(std::find(b.ids.begin(), b.ids.end(), id) - b.ids.begin()));
  for (size_t i = 0; i < b.ids.size(); ++i)
    if (std::find(shared.begin(), shared.end(), b.ids[i]) == shared.end()) {
      b_perm.push_back(static_cast<int>(i));
      out_ids.push_back(b.ids[i]);
      out_shape.push_back(b.t.shape[i]);
      free_b *= static_cast<size_t>(b.t.shape[i]);
    }
  const Tensor ap = permute_axes(a.t, a_perm);
  const Tensor bp = permute_axes(b.t, b_perm);
  Tensor out(out_shape);
  for (size_t i = 0; i < free_a; ++i)
    for (size_t k = 0; k < sh; ++k) {
      const cplx av = ap.data[i * sh + k];
      if (av == cplx(0)) continue;
      for (size_t j = 0; j < free_b; ++j) out.data[i * free_b + j] += av * bp.data[k * free_b + j];
    }
  return Piece{std::move(out), std::move(out_ids)};
}

}  // namespace detail

// Full index sum over the wires; the result's legs follow the open list.
// Greedy pairwise order, smallest intermediate first.
inline Tensor contract(const Network& net) {
  validate(net);
  if (net.has_random())
    throw std::invalid_argument("network: random boxes present, expand first");

  // assign axis ids: one per wire, one per open leg
  std::vector<std::vector<int>> axis(net.nodes.size());
  for (size_t v = 0; v < net.nodes.size(); ++v)
    axis[v].assign(static_cast<size_t>(net.node_arity(static_cast<int>(v))), -1);
  int next_id = 0;
  for (const auto& [a, b] : net.wires) {
    axis[static_cast<size_t>(a.node)][static_cast<size_t>(a.slot)] = next_id;
    axis[static_cast<size_t>(b.node)][static_cast<size_t>(b.slot)] = next_id;
    ++next_id;
  }
  std::vector<int> open_ids;
  for (const auto& e : net.open) {
    axis[static_cast<size_t>(e.node)][static_cast<size_t>(e.slot)] = next_id;
    open_ids.push_back(next_id);
    ++next_id;
  }

  std::vector<detail::Piece> pieces;
  for (size_t v = 0; v < net.nodes.size(); ++v) {
    detail::Piece p{net.tensors[static_cast<size_t>(net.nodes[v].tensor)], axis[v]};
    detail::self_trace(p);
    pieces.push_back(std::move(p));
  }
  if (pieces.empty()) {
    Tensor one;
    one.data[0] = 1.0;  // empty product
    return one;
  }

  while (pieces.size() > 1) {
    // best sharing pair by smallest result, else smallest tensor product
    size_t bi = 0, bj = 1;
    size_t best = SIZE_MAX;
    bool best_shares = false;
    for (size_t i = 0; i < pieces.size(); ++i)
      for (size_t j = i + 1; j < pieces.size(); ++j) {
        bool shares = false;
        size_t result = 1;
        for (size_t a = 0; a < pieces[i].ids.size(); ++a) {
          const bool s = std::find(pieces[j].ids.begin(), pieces[j].ids.end(), pieces[i].ids[a]) !=
                         pieces[j].ids.end();
          if (s)
            shares = true;
          else
            result *= static_cast<size_t>(pieces[i].t.shape[a]);
        }
        for (size_t a = 0; a < pieces[j].ids.size(); ++a)
          if (std::find(pieces[i].ids.begin(), pieces[i].ids.end(), pieces[j].ids[a]) ==
              pieces[i].ids.end())
            result *= static_cast<size_t>(pieces[j].t.shape[a]);
        if ((shares && !best_shares) || (shares == best_shares && result < best)) {
          bi = i;
          bj = j;
          best = result;
          best_shares = shares;
        }
      }
    auto merged = detail::contract_pair(pieces[bi], pieces[bj]);
    pieces.erase(pieces.begin() + static_cast<long>(bj));
    pieces[bi] = std::move(merged);
  }

  // order the axes as the open list dictates
  auto& final_piece = pieces.front();
  std::vector<int> perm;
  for (int id : open_ids) {
    const auto it = std::find(final_piece.ids.begin(), final_piece.ids.end(), id);
    if (it == final_piece.ids.end())
      throw std::logic_error("network: open leg lost during contraction");
    perm.push_back(static_cast<int>(it - final_piece.ids.begin()));
  }
  return permute_axes(final_piece.t, perm);
}

}  // namespace diagex
