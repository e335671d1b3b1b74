#include <stdio.h>
#include <string.h>

#include "ostrunc.h"

static const char *DOC =
    "{\"distributions\":[{\"kind\":\"uniform\",\"params\":[0,1]},"
    "{\"kind\":\"uniform\",\"params\":[0,1]}],"
    "\"k\":1,\"bounds\":{\"lower\":0.5,\"upper\":0.8}}";

#define CHECK(expr)                                                          \
    do {                                                                     \
        OstruncStatus st_ = (expr);                                          \
        if (st_ != OSTRUNC_STATUS_OK) {                                      \
            const char *m_ = ostrunc_last_error_message();                   \
            fprintf(stderr, "%s -> %d (%s)\n", #expr, (int)st_, m_ ? m_ : ""); \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(void) {
    OstruncProblem *p = NULL;
    OstruncSampler *s = NULL;
    size_t regions = 0;
    double f = 0.0, ys[1000];

    CHECK(ostrunc_problem_from_json(DOC, &p));
    CHECK(ostrunc_sampler_new(p, 42, 0, &s));
    CHECK(ostrunc_sampler_region_count(s, &regions));
    CHECK(ostrunc_sampler_acceptance_probability(s, &f));
    CHECK(ostrunc_sampler_draw(s, OSTRUNC_METHOD_MAPPED, ys, 1000, NULL));
    for (int i = 0; i < 1000; i++) {
        if (!(ys[i] > 0.5 && ys[i] < 0.8)) {
            fprintf(stderr, "draw %d out of bounds: %g\n", i, ys[i]);
            return 1;
        }
    }
    if (ostrunc_problem_from_json(NULL, &p) != OSTRUNC_STATUS_NULL_POINTER) {
        return 1;
    }
    printf("regions=%zu f=%.6f\n", regions, f);
    ostrunc_sampler_free(s);
    ostrunc_problem_free(p);
    return 0;
}
