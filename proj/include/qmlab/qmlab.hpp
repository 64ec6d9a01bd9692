// qmlab.hpp
// Umbrella header for the simulation library (excludes the CLI front end).

#pragma once

#include "qmlab/bloch.hpp"
#include "qmlab/distribution.hpp"
#include "qmlab/dynamics.hpp"
#include "qmlab/epr.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/hilbert.hpp"
#include "qmlab/machine.hpp"
#include "qmlab/matrix.hpp"
#include "qmlab/rng.hpp"
