from appconf import AppConf
from django.conf import settings


class GroverAppConf(AppConf):
    FIT_RESTARTS = 32
    FIT_GRID = (0.1, 1.0, 512)
    FIT_OBJECTIVE = "sum-of-squares"
    FIT_SEED = 0
    FIT_MAXITER = 20000
    FIT_TOLERANCE = 1e-10
    SCAN_POINTS = 10000
    REFINE_TOLERANCE = 1e-12
    STATEVECTOR_MAX_QUBITS = 14
    STATEVECTOR_MAX_STAGES = 32
    VERIFY_TOLERANCE = 1e-10
    EQUIVALENCE_TOLERANCE = 1e-12
    CSV_FLOAT_FORMAT = "%.12g"
    REPORT_DIGITS = 9

    class Meta:
        prefix = "grover"
