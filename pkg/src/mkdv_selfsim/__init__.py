"""Fourier-side construction of self-similar mKdV profiles.

Modules:
    specfun     -- rescaled-convention Airy function, Fresnel tail integrals
    model       -- configuration, grids, spectral fields, weighted norms
    phase       -- cutoffs, the cubic phase polynomial, stationary-phase charts
    quadrature  -- oscillatory panel quadrature engine (Filon / Gauss hybrid)
    operators   -- the K, J, I oscillatory operators (brute and fast modes)
    ansatz      -- two-term high-frequency ansatz S_A and asymptotic models
    fixedpoint  -- Picard iteration for the remainder z and boundary inversion
    painleve    -- Painleve II shooting and Hastings-McLeod envelope fits
    transform   -- inverse oscillatory transform and cross validation
    cli         -- command line interface
"""

__version__ = "0.1.0"
