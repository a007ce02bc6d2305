"""Indexed binary min-heap over integer items with decrease-key.

The heap lives in caller-owned arrays so kernels can reuse one allocation across
many searches:

* ``heap[0:size]`` holds items,
* ``pos[item]`` is the item's slot or -1,
* ``keys[item]`` is the item's priority.

Equal keys pop in ascending item order, which keeps every search deterministic.
"""
import numpy as np

from ._accel import kernel


def new_heap(capacity):
    heap = np.empty(max(capacity, 1), dtype=np.int64)
    pos = np.full(max(capacity, 1), -1, dtype=np.int64)
    return heap, pos


@kernel
def _less(keys, a, b):
    ka = keys[a]
    kb = keys[b]
    return ka < kb or (ka == kb and a < b)


@kernel
def _sift_up(heap, pos, keys, i):
    item = heap[i]
    while i > 0:
        parent = (i - 1) >> 1
        other = heap[parent]
        if _less(keys, item, other):
            heap[i] = other
            pos[other] = i
            i = parent
        else:
            break
    heap[i] = item
    pos[item] = i


@kernel
def _sift_down(heap, pos, keys, i, size):
    item = heap[i]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        right = child + 1
        if right < size and _less(keys, heap[right], heap[child]):
            child = right
        if _less(keys, heap[child], item):
            heap[i] = heap[child]
            pos[heap[i]] = i
            i = child
        else:
            break
    heap[i] = item
    pos[item] = i


@kernel
def heap_push(heap, pos, keys, size, item):
    """Insert ``item`` (key already in ``keys``) or restore order after its key dropped."""
    if pos[item] >= 0:
        _sift_up(heap, pos, keys, pos[item])
        return size
    heap[size] = item
    pos[item] = size
    _sift_up(heap, pos, keys, size)
    return size + 1


@kernel
def heap_pop(heap, pos, keys, size):
    top = heap[0]
    pos[top] = -1
    size -= 1
    if size > 0:
        heap[0] = heap[size]
        pos[heap[0]] = 0
        _sift_down(heap, pos, keys, 0, size)
    return top, size
