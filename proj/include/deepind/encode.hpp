#pragma once

#include "deepind/core.hpp"

namespace deepind {

// Henry Ford transformation: rewrites structured constructor returns into
// fresh index variables plus Equal constraints (prepended to the domain).
// Identity on ADTs/nested types and on already-encoded declarations;
// idempotent. Equal itself passes through unchanged. Throws TRULY_NESTED
// for truly nested GADTs.
DataDecl henry_ford(const DataDecl& d);

}  // namespace deepind
