#include <stdio.h>
#include "cmv.h"

int main(void) {
    CmvScheme *s = NULL;
    if (cmv_scheme_two_mode(0.99, 0.6180339887498949, 0.1, 0.2, &s) != CMV_STATUS_OK) {
        fprintf(stderr, "%s\n", cmv_last_error_message());
        return 1;
    }
    CmvLyapunov est;
    CmvComplex z = {1.0, 0.0};
    if (cmv_lyapunov_estimate(s, z, 200, CMV_SAMPLING_MODE_GRID, 8, 0, &est) != CMV_STATUS_OK) {
        return 1;
    }
    CmvWindow *w = NULL;
    CmvComplex one = {1.0, 0.0};
    CmvComplex e[64];
    if (cmv_window_new(s, 0, 7, one, one, &w) != CMV_STATUS_OK || cmv_window_spectrum(w, e, 64) != CMV_STATUS_OK) {
        return 1;
    }
    printf("cmv %s: L_200 = %.6f, size %zu, first eigenvalue %.6f%+.6fi\n",
           cmv_version(), est.mean, (size_t)cmv_window_size(w), e[0].re, e[0].im);
    cmv_window_free(w);
    cmv_scheme_free(s);
    return 0;
}
