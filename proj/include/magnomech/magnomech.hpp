#pragma once

#include "magnomech/environments.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/experiments.hpp"
#include "magnomech/fock.hpp"
#include "magnomech/hamiltonians.hpp"
#include "magnomech/io.hpp"
#include "magnomech/langevin.hpp"
#include "magnomech/lindblad.hpp"
#include "magnomech/params.hpp"
#include "magnomech/perturbation.hpp"
#include "magnomech/quadrature.hpp"
#include "magnomech/version.hpp"
