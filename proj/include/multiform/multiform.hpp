// Umbrella header.

#ifndef MULTIFORM_MULTIFORM_HPP
#define MULTIFORM_MULTIFORM_HPP

#include "algebra.hpp"
#include "corpus.hpp"
#include "form.hpp"
#include "hierarchy.hpp"
#include "linsolve.hpp"
#include "multiform_core.hpp"
#include "parser.hpp"
#include "poisson.hpp"
#include "random_gen.hpp"
#include "render.hpp"
#include "report.hpp"
#include "rewrite.hpp"
#include "scalar.hpp"
#include "search.hpp"
#include "variational.hpp"

#endif
