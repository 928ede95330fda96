#ifndef PACKET_ATOM_H
#define PACKET_ATOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum PaStatus {
  PA_STATUS_OK = 0,
  PA_STATUS_NULL_POINTER = 1,
  PA_STATUS_INVALID_PARAMETER = 2,
  PA_STATUS_QUADRATURE = 3,
  PA_STATUS_ODE = 4,
  PA_STATUS_DIVISION_HAZARD = 5,
  PA_STATUS_RECURRENCE_WINDOW = 6,
  PA_STATUS_INSUFFICIENT_COVERAGE = 7,
  PA_STATUS_PANIC = 8,
} PaStatus;

/**
 * First-order model of an initially excited atom in a box of length `length`.
 */
typedef struct PaFirstOrder PaFirstOrder;

/**
 * Zeroth-order model of an excited atom and a one-photon packet.
 */
typedef struct PaModel PaModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t pa_last_error_message(char *buf, size_t len);

/**
 * Creates a model with decay constant `gamma`, packet width `kappa` and
 * displacement `lambda` (negative: the packet approaches the atom).
 *
 * # Safety
 * `model` must be a valid pointer; on success it receives a handle to be
 * released with [`pa_model_free`].
 */
enum PaStatus pa_model_new(double gamma, double kappa, double lambda, struct PaModel **model);

/**
 * Releases a model. Null is accepted.
 *
 * # Safety
 * `model` must be null or a handle from [`pa_model_new`] not yet freed.
 */
void pa_model_free(struct PaModel *model);

/**
 * Sets the wavenumber domain [-k_max, k_max] and relative tolerance.
 *
 * # Safety
 * `model` must be a live handle.
 */
enum PaStatus pa_model_set_quadrature(struct PaModel *model, double k_max, double rel_tol);

/**
 * Ground-state probability P-(t) and its error estimate.
 *
 * # Safety
 * `model` must be a live handle; `value` and `error` valid pointers
 * (`error` may be null).
 */
enum PaStatus pa_prob_ground(const struct PaModel *model, double t, double *value, double *error);

/**
 * P-(t) on `n_points` uniform times in [0, t_end]; writes `times` and
 * `p_minus`, each of length `n_points`.
 *
 * # Safety
 * `times` and `p_minus` must each point to `n_points` writable doubles.
 */
enum PaStatus pa_kinetics_trace(const struct PaModel *model,
                                double t_end,
                                size_t n_points,
                                double *times,
                                double *p_minus);

/**
 * Stimulated change of the final excited population: quadrature value and
 * the closed-form estimate.
 *
 * # Safety
 * `model` must be a live handle; outputs valid pointers.
 */
enum PaStatus pa_induced_shift(const struct PaModel *model, double *numerical, double *closed_form);

/**
 * Spectral density S(omega) of the photons left after the emission.
 *
 * # Safety
 * `model` must be a live handle; `value` a valid pointer.
 */
enum PaStatus pa_spectral_density(const struct PaModel *model, double omega, double *value);

/**
 * # Safety
 * `model` must be a valid pointer; release the handle with
 * [`pa_first_order_free`].
 */
enum PaStatus pa_first_order_new(double gamma,
                                 double kappa,
                                 double lambda,
                                 double length,
                                 struct PaFirstOrder **model);

/**
 * # Safety
 * `model` must be null or a handle from [`pa_first_order_new`] not yet freed.
 */
void pa_first_order_free(struct PaFirstOrder *model);

/**
 * Excited-state probability P+(t) with the first-order packet correction.
 *
 * # Safety
 * `model` must be a live handle; `value` valid, `error` valid or null.
 */
enum PaStatus pa_first_order_prob_excited(const struct PaFirstOrder *model,
                                          double t,
                                          double *value,
                                          double *error);

/**
 * Semiclassical one-dimensional shift for inversion `w` at arrival.
 *
 * # Safety
 * `value` must be a valid pointer.
 */
enum PaStatus pa_semiclassical_shift_1d(double w, double gamma, double delta, double *value);

/**
 * Peak excitation of a ground-state atom scattering the packet in a box of
 * `n_modes` modes, integrated on `n_points` times in [0, t_end].
 *
 * # Safety
 * `peak` and `peak_time` must be valid pointers.
 */
enum PaStatus pa_mode_scattering_peak(double gamma,
                                      double kappa,
                                      double lambda,
                                      double length,
                                      size_t n_modes,
                                      double t_end,
                                      size_t n_points,
                                      double *peak,
                                      double *peak_time);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PACKET_ATOM_H */
