#pragma once

// Everything in one include.

#include "weakiso/error.hpp"
#include "weakiso/guards.hpp"
#include "weakiso/bitword.hpp"
#include "weakiso/bigint.hpp"
#include "weakiso/cubemap.hpp"
#include "weakiso/families.hpp"
#include "weakiso/classify.hpp"
#include "weakiso/counting.hpp"
#include "weakiso/groupsearch.hpp"
#include "weakiso/io.hpp"
#include "weakiso/verify.hpp"
