#ifndef DDLAB_DDLAB_HPP
#define DDLAB_DDLAB_HPP

#include "algebra.hpp"
#include "cancellation.hpp"
#include "derivations.hpp"
#include "errors.hpp"
#include "groebner.hpp"
#include "isomorphisms.hpp"
#include "laurent.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "presentation.hpp"
#include "rational.hpp"
#include "report.hpp"

#endif
