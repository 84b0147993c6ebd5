"""Universal coacting bialgebras of finite-dimensional algebras over quadratic operads."""

__version__ = "0.1.0"
