#pragma once

#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "ldoi.hpp"
#include "network.hpp"

namespace diagex {

using nlohmann::json;

// Complex scalars are serialized as [re, im]; bare numbers are read as reals.
inline json to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("complex entries must be numbers or [re, im] pairs");
}

inline json tensor_to_json(const Tensor& t) {
  json entries = json::array();
  for (const cplx& v : t.data) entries.push_back(to_json(v));
  return json{{"shape", t.shape}, {"entries", entries}};
}

inline Tensor tensor_from_json(const json& j) {
  const auto shape = j.at("shape").get<std::vector<int>>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != shape_size(shape))
    throw std::invalid_argument("entry count does not match the shape");
  std::vector<cplx> data;
  data.reserve(entries.size());
  for (const auto& e : entries) data.push_back(complex_from_json(e));
  return Tensor(shape, std::move(data));
}

inline json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(to_json(m(i, j)));
  return json{{"rows", static_cast<int>(m.rows())},
              {"cols", static_cast<int>(m.cols())},
              {"entries", entries}};
}

inline Matrix matrix_from_json(const json& j) {
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix sizes must be positive");
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("entry count does not match rows*cols");
  Matrix m(rows, cols);
  size_t off = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(entries[off++]);
  return m;
}

inline json triple_to_json(const MatrixTriple& t) {
  return json{{"a", matrix_to_json(t.a)}, {"b", matrix_to_json(t.b)}, {"c", matrix_to_json(t.c)}};
}

inline MatrixTriple triple_from_json(const json& j) {
  MatrixTriple t{matrix_from_json(j.at("a")), matrix_from_json(j.at("b")),
                 matrix_from_json(j.at("c"))};
  require_triple(t);
  return t;
}

inline FactorPair factors_from_json(const json& j) {
  return {matrix_from_json(j.at("v")), matrix_from_json(j.at("w"))};
}

inline Flavor flavor_from_string(const std::string& s) {
  if (s == "u") return Flavor::u;
  if (s == "ubar") return Flavor::u_conjugate;
  if (s == "s") return Flavor::s;
  throw std::invalid_argument("flavor must be one of u, ubar, s");
}

// Network document:
//   dimension  wire and box dimension d
//   tensors    name -> {shape, entries}
//   nodes      list of {tensor: name} or {family: name, flavor: u|ubar|s}
//   wires      list of [[node, leg], [node, leg]]
//   open       list of [node, leg]; omitted means every unwired leg in order
inline Network network_from_json(const json& j) {
  Network net;
  net.dimension = j.at("dimension").get<int>();

  std::map<std::string, int> by_name;
  if (j.contains("tensors"))
    for (const auto& [name, tj] : j.at("tensors").items()) {
      by_name[name] = static_cast<int>(net.tensors.size());
      net.tensors.push_back(tensor_from_json(tj));
    }

  for (const auto& nj : j.at("nodes")) {
    if (nj.contains("tensor")) {
      const auto name = nj.at("tensor").get<std::string>();
      const auto it = by_name.find(name);
      if (it == by_name.end())
        throw std::invalid_argument("node references unknown tensor " + name);
      Network::Node node;
      node.tensor = it->second;
      net.nodes.push_back(node);
    } else if (nj.contains("family")) {
      Network::Node node;
      node.tag = RandomTag{nj.at("family").get<std::string>(),
                           flavor_from_string(nj.at("flavor").get<std::string>())};
      net.nodes.push_back(node);
    } else {
      throw std::invalid_argument("node needs a tensor name or a family tag");
    }
  }

  const auto leg_of = [](const json& lj) {
    if (!lj.is_array() || lj.size() != 2)
      throw std::invalid_argument("legs are [node, slot] pairs");
    return Leg{lj[0].get<int>(), lj[1].get<int>()};
  };
  if (j.contains("wires"))
    for (const auto& wj : j.at("wires")) {
      if (!wj.is_array() || wj.size() != 2)
        throw std::invalid_argument("wires are pairs of legs");
      net.wires.push_back({leg_of(wj[0]), leg_of(wj[1])});
    }
  if (j.contains("open"))
    for (const auto& oj : j.at("open")) net.open.push_back(leg_of(oj));
  else
    auto_open(net);

  validate(net);
  return net;
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace diagex
