"""Monte Carlo pincell transport with particle sorting and on-the-fly Doppler broadening."""

__version__ = "0.1.0"
