#pragma once

// Prediction/gold pairs with counts worked out by hand.

#include <cstddef>
#include <vector>

#include "sememe/eval/metrics.hpp"

namespace sememe::testing {

struct PrfCase {
  std::vector<eval::LabelSet> predictions;
  std::vector<eval::LabelSet> golds;
  std::size_t tp, fp, fn, exact;
  double precision, recall, f1, accuracy;
};

inline std::vector<PrfCase> handcrafted_prf_cases() {
  return {
      {{{"a", "c"}}, {{"a", "b"}}, 1, 1, 1, 0, 1.0 / 2, 1.0 / 2, 1.0 / 2, 0.0},
      {{{"a", "b"}}, {{"a", "b"}}, 2, 0, 0, 1, 1.0, 1.0, 1.0, 1.0},
      {{{}}, {{"a", "b"}}, 0, 0, 2, 0, 0.0, 0.0, 0.0, 0.0},
      {{{"a"}}, {{"a", "b"}}, 1, 0, 1, 0, 1.0, 1.0 / 2, 2.0 / 3, 0.0},
      {{{"a"}, {"c"}, {}, {"a", "d", "e"}}, {{"a"}, {"b"}, {"c"}, {"d"}}, 2, 3, 2, 1, 2.0 / 5, 1.0 / 2, 4.0 / 9, 1.0 / 4},
      {{{"b"}}, {{"a"}}, 0, 1, 1, 0, 0.0, 0.0, 0.0, 0.0},
      {{{"a", "b", "c", "d"}}, {{"a", "b", "c"}}, 3, 1, 0, 0, 3.0 / 4, 1.0, 6.0 / 7, 0.0},
      {{{"a"}, {"a"}}, {{"a"}, {"a"}}, 2, 0, 0, 2, 1.0, 1.0, 1.0, 1.0},
      {{{"b", "a"}, {"c", "d"}}, {{"a", "b"}, {"c"}}, 3, 1, 0, 1, 3.0 / 4, 1.0, 6.0 / 7, 1.0 / 2},
      {{{"x", "y", "z"}}, {{"x"}}, 1, 2, 0, 0, 1.0 / 3, 1.0, 1.0 / 2, 0.0},
      {{{"e"}}, {{"a", "b", "c", "d"}}, 0, 1, 4, 0, 0.0, 0.0, 0.0, 0.0},
      {{{}, {}, {}}, {{"a"}, {"b"}, {"c"}}, 0, 0, 3, 0, 0.0, 0.0, 0.0, 0.0},
      {{{"a"}, {"b"}, {"c"}}, {{"a", "b"}, {"b", "c"}, {"c", "d"}}, 3, 0, 3, 0, 1.0, 1.0 / 2, 2.0 / 3, 0.0},
      {{{"a", "b"}, {"b", "c"}, {"c", "d"}}, {{"a", "b"}, {"b", "c"}, {"c", "d"}}, 6, 0, 0, 3, 1.0, 1.0, 1.0, 1.0},
      {{{"s1", "s4"}, {"s4", "s1"}}, {{"s1", "s2", "s3"}, {"s4"}}, 2, 2, 2, 0, 1.0 / 2, 1.0 / 2, 1.0 / 2, 0.0},
      {{{"a", "b", "c", "d", "e"}}, {{"a"}}, 1, 4, 0, 0, 1.0 / 5, 1.0, 1.0 / 3, 0.0},
      {{{"a", "b"}, {"a"}, {"b"}, {}, {"c"}},
       {{"a", "b"}, {"a", "b"}, {"a", "b"}, {"a", "b"}, {"a", "b"}},
       4, 1, 6, 1, 4.0 / 5, 2.0 / 5, 8.0 / 15, 1.0 / 5},
      {{{"好"}}, {{"好", "学"}}, 1, 0, 1, 0, 1.0, 1.0 / 2, 2.0 / 3, 0.0},
      {{{"b"}, {"a"}}, {{"a"}, {"b"}}, 0, 2, 2, 0, 0.0, 0.0, 0.0, 0.0},
      {{{"a", "b"}, {"d", "e", "x"}, {"f"}}, {{"a", "b", "c"}, {"d", "e"}, {"f"}}, 5, 1, 1, 1, 5.0 / 6, 5.0 / 6, 5.0 / 6,
       1.0 / 3},
  };
}

}  // namespace sememe::testing
