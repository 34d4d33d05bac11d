"""
Services package for the rampcast application.

One module per pipeline stage: data_io (series I/O and synthesis), atmos
(hub height, power curve, ramp labels), sigproc (DWT, EMD, entropy), svr
(the four kernel regressors), ensembles (trees, forest, boosting,
persistence), evalx (metrics and reports) and pipeline (experiment
orchestration). experiment_service records runs in the database and is the
only module that needs Django models.
"""
