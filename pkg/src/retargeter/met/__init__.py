"""The meta-language: syntax, parser, printer, and evaluator.

Import from the submodules (``syntax``, ``parser``, ``printer``,
``interp``) or from the top-level package, which re-exports the public
names.  This initializer stays empty so that ``domains`` (which the
evaluator depends on) can import the syntax module without a cycle.
"""
