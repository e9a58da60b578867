from .density import DensitySpec, density, density_forward, transfer_residual, transfer_residuals

__all__ = ["DensitySpec", "density", "density_forward", "transfer_residual", "transfer_residuals"]
