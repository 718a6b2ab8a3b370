#include "islandap/grid.hpp"

#include <sstream>

#include "islandap/error.hpp"

namespace islandap {

Grid::Grid(double a, double b, int I, int J)
    : a_(a), b_(b), I_(I), J_(J), hx_(a / I), hy_(b / J) {
  if (!(a > 0.0) || !(b > 0.0) || I < 2 || J < 2) {
    std::ostringstream msg;
    msg << "grid needs a, b > 0 and I, J >= 2 (got a=" << a << ", b=" << b << ", I=" << I
        << ", J=" << J << ")";
    throw Error(ErrorKind::InvalidConfig, msg.str());
  }
}

Grid build_grid(double a, double b, int I, int J) { return Grid(a, b, I, J); }

}  // namespace islandap
