#pragma once

#include <doctest.h>

#include "grassmann/atlas.hpp"
#include "grassmann/error.hpp"

namespace test {

using namespace grassmann;

inline Mat unit(Index n, Index i) {
  Mat e = Mat::Zero(n, 1);
  e(i, 0) = 1.0;
  return e;
}

inline Subspace span(const Mat& cols) { return Subspace::from_spanning(cols); }

inline Mat col2(cplx a, cplx b) {
  Mat v(2, 1);
  v << a, b;
  return v;
}

inline Mat scalar(cplx a) { return Mat::Constant(1, 1, a); }

/// Name of the grassmann::Error kind thrown by fn, "none" if it returns.
template <class Fn>
const char* error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return to_string(e.kind());
  }
  return "none";
}

}  // namespace test

#define CHECK_KIND(expr, kind) CHECK(std::string(test::error_kind([&] { (void)(expr); })) == kind)
