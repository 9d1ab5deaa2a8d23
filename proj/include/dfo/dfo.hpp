#ifndef DFO_DFO_HPP
#define DFO_DFO_HPP

#include "dfo/bench.hpp"
#include "dfo/certify.hpp"
#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/inner.hpp"
#include "dfo/io.hpp"
#include "dfo/linalg.hpp"
#include "dfo/methods.hpp"
#include "dfo/model.hpp"

#endif  // DFO_DFO_HPP
