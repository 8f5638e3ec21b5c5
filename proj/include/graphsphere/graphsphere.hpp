#pragma once

#include "graphsphere/datagen.hpp"
#include "graphsphere/errors.hpp"
#include "graphsphere/eval.hpp"
#include "graphsphere/graph.hpp"
#include "graphsphere/io.hpp"
#include "graphsphere/matrix.hpp"
#include "graphsphere/model.hpp"
#include "graphsphere/objective.hpp"
#include "graphsphere/rng.hpp"
#include "graphsphere/trainer.hpp"
#include "graphsphere/version.hpp"
