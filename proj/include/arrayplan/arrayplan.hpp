#pragma once

#include "geometry.hpp"
#include "environment.hpp"
#include "node_grid.hpp"
#include "grid_graph.hpp"
#include "best_path.hpp"
#include "distance_field.hpp"
#include "radio.hpp"
#include "gain_table.hpp"
#include "channel_dump.hpp"
#include "placement.hpp"
#include "lp_writer.hpp"
#include "experiment.hpp"
