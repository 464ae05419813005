#pragma once

#include <cmath>

namespace dsrsim {

struct Position {
    double x = 0;
    double y = 0;
};

inline double distance(Position a, Position b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace dsrsim
