#pragma once

// Published example traces and slices for the running queries, in the trace
// text format. Input-label naming drift in the originals is normalized
// (the D cell of S's third row is s32 throughout; the hoisted constant in
// the aggregation query is y1; the C projections of rows 2 and 3 read r23
// and r33).

namespace nrct::goldens {

inline const char* q1_trace() {
  return R"(l <- comp(r,{
  [r1] x11 <- proj_C(r1,r13); x1 <- comp(s,{
    [s1] x111 <- proj_C(s1,s11); x112 <- x11 = x111;
         cond(x112,f,x113 <- {}),
    [s2] x121 <- proj_C(s2,s21); x122 <- x11 = x121;
         cond(x122,f,x123 <- {}),
    [s3] x131 <- proj_C(s3,s31); x132 <- x11 = x131;
         cond(x132,t,l11 <- proj_A(r1,r11);
                     l12 <- proj_B(r1,r12);
                     l13 <- proj_D(s3,s32);
                     l1 <- (A:l11,B:l12,D:l13);
                     x136 <- {l1})}),
  [r2] x21 <- proj_C(r2,r23); x2 <- comp(s,{
    [s1] x211 <- proj_C(s1,s11); x212 <- x21 = x211;
         cond(x212,f,x213 <- {}),
    [s2] x221 <- proj_C(s2,s21); x222 <- x21 = x221;
         cond(x222,f,x223 <- {}),
    [s3] x231 <- proj_C(s3,s31); x232 <- x21 = x231;
         cond(x232,t,l21 <- proj_A(r2,r21);
                     l22 <- proj_B(r2,r22);
                     l23 <- proj_D(s3,s32);
                     l2 <- (A:l21,B:l22,D:l23);
                     x126 <- {l2})}),
  [r3] x31 <- proj_C(r3,r33); x3 <- comp(s,{
    [s1] x311 <- proj_C(s1,s11); x312 <- x31 = x311;
         cond(x312,f,x313 <- {}),
    [s2] x321 <- proj_C(s2,s21); x322 <- x31 = x321;
         cond(x322,f,x323 <- {}),
    [s3] x331 <- proj_C(s3,s31); x332 <- x31 = x331;
         cond(x332,f,x333 <- {})})})
)";
}

inline const char* q2_trace() {
  return R"(l11' <- 42;  x1 <- 2;
l12' <- sum(s,{
  [s1] x11 <- proj_C(s1,s11); x12 <- x11 = x1;
       cond(x12,t, x13 <- proj_D(s1,s12)),
  [s2] x21 <- proj_C(s2,s21); x22 <- x21 = x1;
       cond(x22,t, x23 <- proj_D(s2,s22)),
  [s3] x31 <- proj_C(s3,s31); x32 <- x31 = x1;
       cond(x32,f, x33 <- 0)});
l1' <- (C:l11',D:l12'); x <- {l1'}; y1 <- 4;
y <- comp(r,{
  [r1] y11 <- proj_C(r1,r13); y12 <- y11 = y1;
       cond(y12,f, y13 <- {}),
  [r2] y21 <- proj_C(r2,r23); y22 <- y21 = y1;
       cond(y22,f,y23 <- {}),
  [r3] y31 <- proj_C(r3,r33); y32 <- y31 = y1;
       cond(y32,t,l21' <- proj_B(r3,r32);
                  l22' <- proj_A(r3,r31);
                  l2' <- (C:l21',D:l22');
                  y33 <- {l2'})});
l' <- x U y
)";
}

// Backward slice of the join query's trace from output row l1.
inline const char* q1_slice_l1() {
  return R"(l <- comp(r,{
  [r1] x11 <- proj_C(r1,r13); x1 <- comp(s,{
    [s3] x131 <- proj_C(s3,s31); x132 <- x11 = x131;
         cond(x132,t,l11 <- proj_A(r1,r11);
                     l12 <- proj_B(r1,r12);
                     l13 <- proj_D(s3,s32);
                     l1 <- (A:l11,B:l12,D:l13);
                     x136 <- {l1})})})
)";
}

// The two-row projection example: {pi_B(x) | x in R} over
// {(A:1,B:2),(A:2,B:3)}, labels l, l1, l2, l11.., outputs l', l1', l2'.
// The comprehension sugar stands for a bind over a singleton body, so each
// iteration ends with the singleton step (the original listing elides it).
inline const char* pib_trace() {
  return R"(l' <- comp(l,{[l1] l1' <- proj_B(l1,l12); p1 <- {l1'},
              [l2] l2' <- proj_B(l2,l22); p2 <- {l2'}})
)";
}

inline const char* pib_backward_slice_l1p() {
  return R"(l' <- comp(l,{[l1] l1' <- proj_B(l1,l12)})
)";
}

inline const char* pib_forward_slice_l22() {
  return R"(l' <- comp(l,{[l2] l2' <- proj_B(l2,l22); p2 <- {l2'}})
)";
}

// Simplified backward slice of the join query at l1.
inline const char* q1_slice_l1_simplified() {
  return R"(l <- comp(r,{
  [r1] x1 <- comp(s,{
    [s3] cond(r13 = s31, t, l1 <- (A: r11, B: r12, D: s32);
              x136 <- {l1})})})
)";
}

// Simplified backward slice of the aggregation query at l12'.
inline const char* q2_slice_l12p_simplified() {
  return R"(l12' <- sum(s,{
  [s1] cond(s11 = 2, t, x13 <- s12),
  [s2] cond(s21 = 2, t, x23 <- s22),
  [s3] cond(s31 = 2, f, x33 <- 0)})
)";
}

}  // namespace nrct::goldens
