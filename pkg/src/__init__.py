"""
Kac-Moody 张量锥不等式计算系统
主要模块包
"""

__version__ = "1.0.0"
__author__ = "kmcone Dev Team"
__description__ = "Kac-Moody 代数张量锥不等式的精确枚举、面维数与不可约性检查"
