"""samlab: SGD/SAM/mSAM optimizers, sharpness estimation, and a linear-stability lab."""

__version__ = "0.1.0"
