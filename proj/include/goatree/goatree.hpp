#ifndef GOATREE_GOATREE_HPP
#define GOATREE_GOATREE_HPP

#include "goatree/enumerate.hpp"
#include "goatree/family.hpp"
#include "goatree/solver.hpp"
#include "goatree/tree.hpp"

#endif  // GOATREE_GOATREE_HPP
