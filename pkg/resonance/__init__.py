"""这是 Dirichlet L 函数共振法工具包。包含算术、特征、L 函数求值、共振子、常数、实验编排与自检模块。"""
"""EN: Resonance-method toolkit for Dirichlet L-functions, with arithmetic, characters, L-function evaluation, resonator, constants, experiment and self-check modules."""
