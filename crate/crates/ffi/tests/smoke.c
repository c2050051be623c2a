#include <math.h>
#include <stdio.h>
#include "sharpbound.h"

int main(void) {
    double v, g[2];
    if (sb_surface_tension_t(0.25, 0.25, &v, g) != SB_STATUS_OK) return 1;
    if (!(v < 0.0)) return 2;
    if (sb_surface_tension_t(2.0, 0.0, &v, g) != SB_STATUS_OUTSIDE_DOMAIN) return 3;
    char msg[256];
    if (sb_last_error_message(msg, sizeof msg) == 0) return 4;
    double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 1.0}, x[2] = {0.25, 0.5}, d;
    SbDomain *dom = NULL;
    if (sb_domain_box(lo, hi, 2, &dom) != SB_STATUS_OK) return 5;
    if (sb_domain_distance(dom, x, 2, &d) != SB_STATUS_OK || fabs(d - 0.25) > 1e-15) return 6;
    sb_domain_free(dom);
    printf("ok %s\n", sb_version());
    return 0;
}
