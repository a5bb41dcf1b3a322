#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "lieiso/chains.hpp"

// Parses polynomials over a fixed variable order.
struct Ring {
  lieiso::VarOrderPtr order;
  explicit Ring(std::vector<std::string> names) : order(lieiso::make_order(std::move(names))) {}
  lieiso::Polynomial operator()(const std::string& s) const { return lieiso::parse_polynomial(s, order); }
  std::vector<lieiso::Polynomial> operator()(std::initializer_list<const char*> l) const {
    std::vector<lieiso::Polynomial> out;
    for (auto s : l) out.push_back((*this)(s));
    return out;
  }
  lieiso::RegularChain chain(std::initializer_list<const char*> l) const {
    return lieiso::RegularChain(lieiso::TriangularSet(order, (*this)(l)), true);
  }
};
