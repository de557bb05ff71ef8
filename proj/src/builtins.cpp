#include <map>

#include "nhvqe/errors.hpp"
#include "nhvqe/matrix.hpp"

namespace nhvqe {

namespace {

using C = Complex;

DenseMatrix make_m1() { return {{C(1, 1), C(2, -1)}, {C(3, 2), C(4, -2)}}; }

DenseMatrix make_m2() {
  return {{C(1, 1), C(2, -1), C(1, 2), C(3, -1)},
          {C(3, 2), C(4, -2), C(2, 1), C(1, -1)},
          {C(1, -1), C(3, 1), C(5, 2), C(2, -2)},
          {C(2, 2), C(1, -3), C(4, 1), C(6, -1)}};
}

// Diagonal j + j*i, off-diagonal j - k*i (1-based row j, column k).
DenseMatrix make_m3() {
  constexpr std::size_t d = 8;
  DenseMatrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double j = static_cast<double>(r + 1);
      const double k = static_cast<double>(c + 1);
      m(r, c) = (r == c) ? C(j, j) : C(j, -k);
    }
  }
  return m;
}

MatrixRecord record(std::string name, DenseMatrix m, std::vector<Complex> reference) {
  return {std::move(name), std::move(m), std::move(reference)};
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"A", "B", "C", "D", "E", "F", "M1", "M2", "M3"};
  return names;
}

MatrixRecord builtin(std::string_view name) {
  const std::vector<Complex> m1_ref = {C(5.3924, -1.1050), C(-0.3924, 0.1050)};
  if (name == "A") return record("A", {{1, 3}, {3, 4}}, {5.8541, -0.8541});
  if (name == "B") return record("B", {{0, 2}, {-2, 0}}, {C(0, -2), C(0, 2)});
  if (name == "C") return record("C", {{1, 2}, {3, 4}}, {5.3723, -0.3723});
  if (name == "D") return record("D", {{1, C(2, 1)}, {C(2, -1), 3}}, {4.4495, -0.4495});
  if (name == "E") return record("E", {{C(0, 1), C(1, -1)}, {C(-1, -1), C(0, 2)}}, {C(0, 3), C(0, 0)});
  if (name == "F") return record("F", make_m1(), m1_ref);
  if (name == "M1") return record("M1", make_m1(), m1_ref);
  if (name == "M2") {
    return record("M2", make_m2(),
                  {C(10.5188, -0.5892), C(-1.6142, -0.5359), C(3.7513, -1.0559), C(3.3441, 2.1809)});
  }
  if (name == "M3") {
    return record("M3", make_m3(), {C(-0.4866, 9.6633), C(-0.3361, 7.4468), C(-0.8231, 11.8959)});
  }
  throw Error(ErrorCode::UnknownMatrix, std::string(name));
}

}  // namespace nhvqe
