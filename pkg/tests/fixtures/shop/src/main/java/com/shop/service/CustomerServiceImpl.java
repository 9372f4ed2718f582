package com.shop.service;

import com.shop.model.Customer;
import com.shop.repository.CustomerRepository;

public class CustomerServiceImpl implements CustomerService {

    private CustomerRepository customerRepository;

    @Override
    public Customer findByEmail(String email) {
        return customerRepository.findByEmail(email);
    }

    static class CustomerCache {
        private Customer last;
    }
}
