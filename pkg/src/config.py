"""
配置管理模块
集中定义默认界、缓存大小、内置数据目录以及自检并发参数
不读取任何环境变量
"""

import logging
from pathlib import Path

logger = logging.getLogger(__name__)


class Config:
    """应用配置类"""

    def __init__(self, root: Path = None):
        """
        初始化配置

        Args:
            root: 项目根目录，默认为本文件的上级目录
        """
        self._root = Path(root) if root is not None else Path(__file__).resolve().parent.parent

    # 数据目录
    @property
    def gcm_dir(self) -> Path:
        """内置GCM文件目录"""
        return self._root / "data" / "gcm"

    @property
    def golden_dir(self) -> Path:
        """golden输出目录"""
        return self._root / "data" / "golden"

    # 默认界
    @property
    def default_max_length(self) -> int:
        return 4

    @property
    def default_depth(self) -> int:
        return 6

    @property
    def default_nmax(self) -> int:
        return 3

    @property
    def default_height(self) -> int:
        return 4

    # 缓存配置
    @property
    def realization_cache_size(self) -> int:
        return 64

    @property
    def weyl_cache_size(self) -> int:
        return 64

    @property
    def bruhat_cache_size(self) -> int:
        """每个Weyl群的Bruhat备忘表最大条目数"""
        return 200000

    @property
    def schubert_cache_size(self) -> int:
        return 32

    @property
    def multiplicity_cache_size(self) -> int:
        return 256

    # 面维数搜索
    @property
    def face_candidate_budget(self) -> int:
        """face_dimension 检查的候选三元组数上限"""
        return 20000

    @property
    def affine_face_candidate_budget(self) -> int:
        """仿射面探测的候选上限"""
        return 400000

    # 自检配置
    @property
    def selftest_max_concurrent(self) -> int:
        return 3

    @property
    def selftest_max_length(self) -> int:
        """freg与长度恒等式扫描的长度上界"""
        return 8

    @property
    def selftest_affine_max_length(self) -> int:
        return 4

    @property
    def selftest_cross_height(self) -> int:
        """A2交叉验证中每个权的余根取值和上界"""
        return 5

    @property
    def selftest_affine_height(self) -> int:
        return 6

    @property
    def selftest_sample_count(self) -> int:
        return 20

    @property
    def selftest_necessity_height(self) -> int:
        """仿射必要性检查中余根取值与 β 坐标的上界"""
        return 2

    # 日志配置
    @property
    def log_level(self) -> str:
        return "INFO"

    @property
    def log_format(self) -> str:
        return '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    def validate(self) -> bool:
        """验证配置完整性"""
        bounds = {
            "default_max_length": self.default_max_length,
            "default_depth": self.default_depth,
            "default_nmax": self.default_nmax,
            "default_height": self.default_height,
            "selftest_max_concurrent": self.selftest_max_concurrent,
        }
        bad = [name for name, value in bounds.items() if value < 1]
        if bad:
            logger.error(f"❌ 配置验证失败: {', '.join(bad)} 必须为正")
            return False
        if not self.gcm_dir.is_dir():
            logger.error(f"❌ 配置验证失败: 找不到GCM目录 {self.gcm_dir}")
            return False
        logger.debug("✅ 配置验证通过")
        return True


# 全局配置实例
config = Config()
