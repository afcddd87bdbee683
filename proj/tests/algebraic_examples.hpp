#pragma once
#include <string>

#include "json.hpp"

namespace testing_support {

using nlohmann::json;

// Unreduced: D^{-1} = R{-1}, D^0 = R{1} + R{-1+2k}, d(1) = (X - h, h^k),
// C = D at h = 0.
inline json spread_example(int k) {
  json j;
  j["flavor"] = "unreduced";
  j["name"] = "spread k=" + std::to_string(k);
  j["generators"] = {{{"label", "e"}, {"i", -1}, {"q", -1}},
                     {{"label", "a"}, {"i", 0}, {"q", 1}},
                     {{"label", "b"}, {"i", 0}, {"q", -1 + 2 * k}}};
  j["dD"] = {{"e", "a", "X"}, {"e", "a", "-h"}, {"e", "b", k == 0 ? "1" : "h^" + std::to_string(k)}};
  j["dC"] = {{"e", "a", "X"}};
  if (k == 0) j["dC"].push_back({"e", "b", "1"});
  return j;
}

// Reduced: C^{-1} = Z, C^0 = Z{2} + Z, d(1) = (0, 2^n); D^{-1} = Z[h],
// D^0 = Z[h]{2} + Z[h], d(1) = (h, 0).
inline json bockstein_example(int n) {
  json j;
  j["flavor"] = "reduced";
  j["name"] = "two-step n=" + std::to_string(n);
  j["generators"] = {{{"label", "e"}, {"i", -1}, {"q", 0}},
                     {{"label", "u"}, {"i", 0}, {"q", 2}},
                     {{"label", "v"}, {"i", 0}, {"q", 0}}};
  j["dC"] = {{"e", "v", std::to_string(1L << n)}};
  j["dD"] = {{"e", "u", "h"}};
  return j;
}

// Reduced: C has d(e) = 2a + 2b only; D has d(e) = 2a + hc and
// d(a) = hz, d(c) = -2z.
inline json beta_sum_example() {
  json j;
  j["flavor"] = "reduced";
  j["name"] = "beta sum";
  j["generators"] = {{{"label", "e"}, {"i", -1}, {"q", 0}}, {{"label", "a"}, {"i", 0}, {"q", 0}},
                     {{"label", "b"}, {"i", 0}, {"q", 0}},  {{"label", "c"}, {"i", 0}, {"q", 2}},
                     {{"label", "z"}, {"i", 1}, {"q", 2}}};
  j["dC"] = {{"e", "a", "2"}, {"e", "b", "2"}};
  j["dD"] = {{"e", "a", "2"}, {"e", "c", "h"}, {"a", "z", "h"}, {"c", "z", "-2"}};
  return j;
}

// Reduced: D^0 = Z[h] + Z[h]{2}, D^1 = Z[h]{2}, d(x, y) = hx + py; C = D at
// h = 0.
inline json torsion_example(int p) {
  json j;
  j["flavor"] = "reduced";
  j["name"] = "torsion p=" + std::to_string(p);
  j["generators"] = {{{"label", "x"}, {"i", 0}, {"q", 0}},
                     {{"label", "y"}, {"i", 0}, {"q", 2}},
                     {{"label", "z"}, {"i", 1}, {"q", 2}}};
  j["dD"] = {{"x", "z", "h"}, {"y", "z", std::to_string(p)}};
  j["dC"] = {{"y", "z", std::to_string(p)}};
  return j;
}

}  // namespace testing_support
