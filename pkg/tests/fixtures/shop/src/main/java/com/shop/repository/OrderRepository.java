package com.shop.repository;

public interface OrderRepository {

    Object save(long cartId);
}
