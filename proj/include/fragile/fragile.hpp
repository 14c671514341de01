#pragma once

#include "fragile/audit.hpp"
#include "fragile/chordal.hpp"
#include "fragile/error.hpp"
#include "fragile/gadgets.hpp"
#include "fragile/generators.hpp"
#include "fragile/graph.hpp"
#include "fragile/io.hpp"
#include "fragile/layering.hpp"
#include "fragile/parameters.hpp"
#include "fragile/pipeline.hpp"
#include "fragile/plane.hpp"
#include "fragile/rational.hpp"
#include "fragile/separators.hpp"
#include "fragile/serialize.hpp"
#include "fragile/td_frag.hpp"
#include "fragile/thin_dist.hpp"
#include "fragile/tree_partition.hpp"
#include "fragile/trigeodesic.hpp"
