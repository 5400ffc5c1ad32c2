#include <stdio.h>
#include <string.h>
#include "tse.h"

int main(void) {
    double rho = 0.0;
    const double m[4] = {0.0, 0.5, 0.5, 0.0};
    if (tse_spectral_radius(m, 2, &rho) != TSE_STATUS_OK || rho < 0.4999 || rho > 0.5001) return 1;

    tse_scenario *s = NULL;
    if (tse_scenario_golden("hamilton_rule", &s) != TSE_STATUS_OK) return 2;
    tse_report *r = NULL;
    if (tse_scenario_run(s, false, 0, &r) != TSE_STATUS_OK) return 3;
    if (tse_scenario_check(s, r) != TSE_STATUS_OK) return 4;
    printf("%s\n", tse_report_summary(r));
    tse_report_free(r);
    tse_scenario_free(s);

    if (tse_scenario_parse("nonsense = [", &s) != TSE_STATUS_INVALID || s != NULL) return 5;
    if (tse_last_error() == NULL || strlen(tse_last_error()) == 0) return 6;
    return 0;
}
