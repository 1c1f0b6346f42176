#include <math.h>
#include <stdio.h>
#include "challenge.h"

#define EXPECT(cond)                                          \
    do {                                                      \
        if (!(cond)) {                                        \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond); \
            return 1;                                         \
        }                                                     \
    } while (0)

int main(void) {
    CtProspect a = {400000, 0.8};
    CtProspect b = {300000, 1.0};
    CtProblem *p = NULL;
    EXPECT(ct_problem_canonicalize(a, b, "t5-1", &p) == CT_STATUS_OK);

    CtProblemInfo info;
    EXPECT(ct_problem_get(p, &info) == CT_STATUS_OK);
    EXPECT(info.domain == CT_DOMAIN_GAIN);
    EXPECT(info.default_prospect.outcome_minor == 300000);

    CtParams *theta = NULL;
    EXPECT(ct_params_fixture("params_gains", &theta) == CT_STATUS_OK);
    double ci = 0.0;
    EXPECT(ct_challenge_index(p, theta, &ci) == CT_STATUS_OK);
    EXPECT(fabs(ci * 100.0 - 6.4324) < 1e-3);

    double lo = 0.0, hi = 0.0;
    EXPECT(ct_fisher_interval(-0.919, 22, 0.95, &lo, &hi) == CT_STATUS_OK);
    EXPECT(fabs(lo + 0.966) < 1e-3 && fabs(hi + 0.813) < 1e-3);

    CtProspect d = {400000, 0.9};
    CtProspect e = {300000, 0.8};
    CtProblem *bad = NULL;
    EXPECT(ct_problem_canonicalize(d, e, "dom", &bad) == CT_STATUS_VALIDATION);
    EXPECT(bad == NULL);
    char msg[256];
    EXPECT(ct_last_error_message(msg, sizeof msg) > 0);

    ct_params_free(theta);
    ct_problem_free(p);
    puts("ok");
    return 0;
}
