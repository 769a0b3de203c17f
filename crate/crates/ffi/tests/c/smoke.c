#include <math.h>
#include <stdio.h>
#include <string.h>

#include "trisector.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    TrisectorSeries *s = NULL;
    CHECK(trisector_series_solve(TRISECTOR_BRANCH_CONJUGATE, 4, &s) == TRISECTOR_STATUS_OK);
    char *m4 = NULL;
    CHECK(trisector_series_coefficient_string(s, TRISECTOR_COEFFICIENT_M, 4, &m4) == TRISECTOR_STATUS_OK);
    CHECK(strcmp(m4, "-351/704-189/704*sqrt3") == 0);
    trisector_string_free(m4);
    bool vanish = false;
    CHECK(trisector_series_residuals_vanish(s, &vanish) == TRISECTOR_STATUS_OK && vanish);
    double v = 0.0;
    CHECK(trisector_series_coefficient(s, TRISECTOR_COEFFICIENT_M, 9, &v) == TRISECTOR_STATUS_OUT_OF_RANGE);
    CHECK(trisector_last_error() != NULL);
    trisector_series_free(s);

    CHECK(trisector_series_solve(TRISECTOR_BRANCH_TRISECTOR, 3, &s) == TRISECTOR_STATUS_INVALID_ARGUMENT);
    CHECK(s == NULL);

    TrisectorCurve *c = NULL;
    CHECK(trisector_curve_trace_parabola(-1.0, 1.0, 401, 5, &c) == TRISECTOR_STATUS_OK);
    TrisectorSample p;
    CHECK(trisector_curve_eval(c, 1.0 / 32.0, &p) == TRISECTOR_STATUS_OK);
    CHECK(fabs(p.x - 0.92795) < 1e-3 && fabs(p.y - 2.82373) < 1e-3);
    size_t n = 0;
    CHECK(trisector_curve_len(c, &n) == TRISECTOR_STATUS_OK && n >= 401);
    trisector_curve_free(c);

    printf("ok %s\n", trisector_version());
    return 0;
}
