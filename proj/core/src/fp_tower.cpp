#include "tracemix/fp_tower.hpp"

// Field types are header-only; this TU pins the static Frobenius tables
// into the library.
namespace tracemix {
static_assert(sizeof(Fp12) == 12 * sizeof(Fp));
}
