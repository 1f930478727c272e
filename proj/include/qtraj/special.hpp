#pragma once

namespace qtraj {

// Airy function Ai(x): Maclaurin series for |x| <= 5.5, asymptotic
// expansions beyond.  Absolute accuracy ~1e-9, enough for the WKB
// comparison reports (tests check WKB against an independent Airy).
double airy_ai(double x);

} // namespace qtraj
