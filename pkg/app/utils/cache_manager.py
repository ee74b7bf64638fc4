"""
缓存管理工具
提供进程内的有界LRU缓存，用于完全齐次函数表、配分枚举与Laurent系数网格
"""
import threading
from collections import OrderedDict
from functools import wraps
from typing import Any, Callable, Dict, Hashable, Optional

from app.core.config import get_settings
from app.core.logging import get_logger

settings = get_settings()
logger = get_logger(__name__)

_MISSING = object()


class CacheManager:
    """缓存管理器

    存入的值必须是不可变对象（元组、只读numpy数组等），
    因此多个调用方共享同一个条目是安全的。
    """

    def __init__(self, max_entries: Optional[int] = None):
        self.max_entries = max_entries or settings.cache_max_entries
        self._store: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable, default: Any = None) -> Any:
        """获取缓存"""
        with self._lock:
            if key in self._store:
                self._store.move_to_end(key)
                self.hits += 1
                return self._store[key]
            self.misses += 1
            return default

    def set(self, key: Hashable, value: Any) -> None:
        """设置缓存，超出容量时淘汰最久未使用的条目"""
        with self._lock:
            self._store[key] = value
            self._store.move_to_end(key)
            while len(self._store) > self.max_entries:
                self._store.popitem(last=False)

    def delete(self, key: Hashable) -> bool:
        """删除缓存"""
        with self._lock:
            return self._store.pop(key, _MISSING) is not _MISSING

    def exists(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._store

    def clear(self, prefix: Optional[str] = None) -> int:
        """清除缓存；给定前缀时只清除该前缀下的条目"""
        with self._lock:
            if prefix is None:
                count = len(self._store)
                self._store.clear()
                return count
            doomed = [k for k in self._store if isinstance(k, tuple) and k[0] == prefix]
            for k in doomed:
                del self._store[k]
            return len(doomed)

    def get_info(self) -> Dict[str, Any]:
        """获取缓存统计信息"""
        with self._lock:
            return {
                "entries": len(self._store),
                "max_entries": self.max_entries,
                "hits": self.hits,
                "misses": self.misses,
            }


# 全局缓存管理器实例
cache_manager = CacheManager()


def cached(key_prefix: str = "") -> Callable:
    """缓存装饰器

    以 (前缀, 函数名, 参数) 为键；参数不可哈希时直接计算，不做缓存。
    """

    def decorator(func: Callable) -> Callable:
        prefix = key_prefix or f"{func.__module__}.{func.__name__}"

        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                cache_key = (prefix, args, tuple(sorted(kwargs.items())))
                hash(cache_key)
            except TypeError:
                return func(*args, **kwargs)

            result = cache_manager.get(cache_key, _MISSING)
            if result is not _MISSING:
                return result

            result = func(*args, **kwargs)
            cache_manager.set(cache_key, result)
            logger.debug("缓存设置", key_prefix=prefix)
            return result

        return wrapper

    return decorator
