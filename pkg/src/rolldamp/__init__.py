"""rolldamp: optimal universal controller synthesis for ship roll damping.

Synthesizes output-feedback controllers that are simultaneously optimal for
every polyharmonic disturbance supported on a fixed frequency set, and
benchmarks them against LQR and notch loop-shaping baselines on a published
vessel model.
"""

__version__ = "0.1.0"
