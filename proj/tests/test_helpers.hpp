#pragma once

#include <cmath>
#include <vector>

#include "humps/nonlinearity.hpp"
#include "humps/weight.hpp"

namespace humps::testing {

// a(t) = sin t on [0, 2pi]: one positive hump, one negative hump.
inline Weight sineWeight() {
    Piece p;
    p.kind = PieceKind::Sine;
    p.t0 = 0.0;
    p.t1 = 2.0 * M_PI;
    p.amp = 1.0;
    p.omega = 1.0;
    p.phase = 0.0;
    return Weight({p});
}

// a(t) = sin t on [0, 3pi]: two positive humps separated by one negative hump.
inline Weight sine3piWeight() {
    Piece p;
    p.kind = PieceKind::Sine;
    p.t0 = 0.0;
    p.t1 = 3.0 * M_PI;
    return Weight({p});
}

// stepwise weight: 1 on [0,1], -2 on [1,2], 0 on [2,2.5], 2 on [2.5,3]
inline Weight stepWeight() {
    auto cpiece = [](double a, double b, double v) {
        Piece p;
        p.kind = PieceKind::Constant;
        p.t0 = a;
        p.t1 = b;
        p.value = v;
        return p;
    };
    return Weight({cpiece(0, 1, 1), cpiece(1, 2, -2), cpiece(2, 2.5, 0), cpiece(2.5, 3, 2)});
}

inline Weight constantWeight(double value, double t0 = 0.0, double t1 = 2.0 * M_PI) {
    Piece p;
    p.kind = PieceKind::Constant;
    p.t0 = t0;
    p.t1 = t1;
    p.value = value;
    return Weight({p});
}

} // namespace humps::testing
