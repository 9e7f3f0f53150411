// Umbrella header.
#pragma once

#include "pia/calculus.hpp"
#include "pia/coupled.hpp"
#include "pia/errors.hpp"
#include "pia/expr.hpp"
#include "pia/fixtures.hpp"
#include "pia/jet.hpp"
#include "pia/job.hpp"
#include "pia/normal.hpp"
#include "pia/oracle.hpp"
#include "pia/parser.hpp"
#include "pia/poly.hpp"
#include "pia/render.hpp"
#include "pia/resultfile.hpp"
#include "pia/scalar.hpp"
#include "pia/upoly.hpp"
#include "pia/verify.hpp"
