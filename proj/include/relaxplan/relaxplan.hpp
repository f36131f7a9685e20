#ifndef RELAXPLAN_RELAXPLAN_HPP
#define RELAXPLAN_RELAXPLAN_HPP

#include "relaxplan/builders.hpp"
#include "relaxplan/combiner.hpp"
#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/extended_ts.hpp"
#include "relaxplan/io.hpp"
#include "relaxplan/oracle.hpp"
#include "relaxplan/planning.hpp"
#include "relaxplan/product.hpp"
#include "relaxplan/rules.hpp"
#include "relaxplan/shortest_path.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/transition_system.hpp"
#include "relaxplan/trim.hpp"
#include "relaxplan/twtl.hpp"
#include "relaxplan/twtl_automaton.hpp"

#endif  // RELAXPLAN_RELAXPLAN_HPP
