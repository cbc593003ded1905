#ifndef HIW_HIW_HPP
#define HIW_HIW_HPP

// Everything at once; the individual headers are self-contained.

#include "hiw/amplifier.hpp"
#include "hiw/arith.hpp"
#include "hiw/bergman.hpp"
#include "hiw/evaluation.hpp"
#include "hiw/fit.hpp"
#include "hiw/hecke.hpp"
#include "hiw/kohnen_zagier.hpp"
#include "hiw/lattice.hpp"
#include "hiw/level_one.hpp"
#include "hiw/lfunction.hpp"
#include "hiw/linalg.hpp"
#include "hiw/log_scaled.hpp"
#include "hiw/number_field.hpp"
#include "hiw/petersson.hpp"
#include "hiw/plus_space.hpp"
#include "hiw/qexpansion.hpp"
#include "hiw/salie.hpp"
#include "hiw/special.hpp"
#include "hiw/supnorm.hpp"
#include "hiw/theta.hpp"

#endif  // HIW_HIW_HPP
