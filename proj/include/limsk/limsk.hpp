#pragma once

#include "limsk/error.hpp"
#include "limsk/graph.hpp"
#include "limsk/presentation.hpp"
#include "limsk/materialize.hpp"
#include "limsk/functor.hpp"
#include "limsk/adjunction.hpp"
#include "limsk/sketch.hpp"
#include "limsk/cells.hpp"
#include "limsk/factorization.hpp"
#include "limsk/models.hpp"
#include "limsk/dsl.hpp"
